//! Property tests for the algebraic invariants, each against an independent
//! oracle where one exists.

use std::collections::BTreeSet;

use houghton::classify::{epsilon, SubgroupDescriptor, SymType};
use houghton::constructions::{choose_translation_elements, sweep_elements, sweep_into_ray1};
use houghton::engine::{gen_class, BfsGroup, GenClass, StabilizerChain};
use houghton::lattice::parity_form;
use houghton::perm::{line_embed, point_project};
use houghton::{HoughtonElement, LatticeBasis, LinePerm, Parity, Point, RayPerm, TranslationVector};
use num_bigint::BigUint;
use proptest::prelude::*;

fn line_perm() -> impl Strategy<Value = LinePerm> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 0..6).prop_map(|swaps| {
        swaps
            .into_iter()
            .filter(|(a, b)| a != b)
            .fold(LinePerm::identity(), |acc, (a, b)| acc.compose(&LinePerm::transposition(a, b)))
    })
}

fn point(n: usize) -> impl Strategy<Value = Point> {
    (1..=n, 1i64..=6).prop_map(|(r, m)| Point::new(r, m))
}

/// Random element of H_n: a word in the generators with optional finitary factors.
fn element(n: usize) -> impl Strategy<Value = HoughtonElement> {
    let letter = prop_oneof![
        (2..=n, -3i64..=3).prop_map(move |(k, e)| HoughtonElement::generator_pow(n, k, e).unwrap()),
        (point(n), point(n)).prop_map(move |(a, b)| {
            let p = if a == b { RayPerm::identity() } else { RayPerm::transposition(a, b) };
            HoughtonElement::from_finitary(n, &p).unwrap()
        }),
    ];
    prop::collection::vec(letter, 0..6)
        .prop_map(move |v| v.iter().fold(HoughtonElement::identity(n), |acc, g| acc.mul(g).unwrap()))
}

fn with_n() -> impl Strategy<Value = (usize, HoughtonElement, HoughtonElement, HoughtonElement)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), element(n), element(n), element(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn compose_is_associative(a in line_perm(), b in line_perm(), c in line_perm()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn parity_is_multiplicative(a in line_perm(), b in line_perm()) {
        let p = a.compose(&b).parity();
        prop_assert_eq!(p.is_odd(), a.parity().is_odd() ^ b.parity().is_odd());
    }

    #[test]
    fn cycles_round_trip(a in line_perm()) {
        prop_assert_eq!(LinePerm::from_cycles(&a.cycles()).unwrap(), a);
    }

    #[test]
    fn line_embedding_round_trip(z in -1000i64..1000, r in 1usize..=2, m in 1i64..1000) {
        prop_assert_eq!(point_project(line_embed(z)).unwrap(), z);
        let x = Point::new(r, m);
        prop_assert_eq!(line_embed(point_project(x).unwrap()), x);
    }

    #[test]
    fn group_laws((_n, g, h, k) in with_n()) {
        prop_assert_eq!(g.mul(&h).unwrap().mul(&k).unwrap(), g.mul(&h.mul(&k).unwrap()).unwrap());
        prop_assert!(g.mul(&g.inv()).unwrap().as_finitary().is_some_and(|p| p.is_identity()));
        prop_assert_eq!(g.shifts().iter().sum::<i64>(), 0);
        let gh = g.mul(&h).unwrap();
        let added: Vec<i64> = g.shifts().iter().zip(h.shifts()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(gh.shifts(), &added[..]);
        prop_assert!(gh.window_check().is_ok());
    }

    #[test]
    fn action_matches_pointwise((n, g, h, _k) in with_n(), x in (1usize..=4, 1i64..=20)) {
        let x = Point::new(x.0.min(n), x.1);
        prop_assert_eq!(g.mul(&h).unwrap().eval(x), h.eval(g.eval(x)));
        prop_assert_eq!(g.inv().eval(g.eval(x)), x);
    }

    #[test]
    fn pi_is_a_homomorphism((_n, g, h, _k) in with_n()) {
        prop_assert_eq!(g.mul(&h).unwrap().pi(), &g.pi() + &h.pi());
        prop_assert_eq!(g.inv().pi(), g.pi().scale(-1));
        prop_assert_eq!(g.t1(), g.pi().0.iter().sum::<i64>());
    }

    #[test]
    fn decomposition_round_trip((n, g, _h, _k) in with_n()) {
        let (sigma, v) = g.decompose().unwrap();
        let back = HoughtonElement::from_finitary(n, &sigma).unwrap()
            .mul(&HoughtonElement::canonical_preimage(n, &v).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn commutator_sign_identity((_n, a, b, c) in with_n()) {
        let p = |x: &HoughtonElement, y: &HoughtonElement| HoughtonElement::commutator(x, y).unwrap().parity_if_fsym().unwrap();
        let lhs = p(&a, &b.mul(&c).unwrap());
        prop_assert_eq!(lhs.is_odd(), p(&a, &b).is_odd() ^ p(&a, &c).is_odd());
    }

    #[test]
    fn orbit_count_law((_n, g, _h, _k) in with_n()) {
        let report = g.orbits();
        let expected: i64 = g.shifts().iter().map(|&s| s.max(0)).sum();
        prop_assert_eq!(report.infinite_orbit_count as i64, expected);
        prop_assert_eq!(traced_infinite_orbits(&g), expected as usize);
        for c in &report.finite_cycles {
            for (i, &x) in c.iter().enumerate() {
                prop_assert_eq!(g.eval(x), c[(i + 1) % c.len()]);
            }
        }
    }
}

/// Counts infinite orbits by following each point of the outgoing bands
/// backwards until it leaves along an incoming ray, insisting that every
/// window point off the finite cycles is met exactly once.
fn traced_infinite_orbits(g: &HoughtonElement) -> usize {
    let ginv = g.inv();
    let n = g.n();
    let b = (1..=n).map(|r| g.bound(r).max(ginv.bound(r))).max().unwrap_or(0) + 1;
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for r in 1..=n {
        let s = g.shift(r);
        for j in 1..=s {
            count += 1;
            let mut x = Point::new(r, b + j);
            loop {
                assert!(seen.insert(x), "orbit met twice at {x}");
                x = ginv.eval(x);
                if x.index > b && g.shift(x.ray) < 0 {
                    break;
                }
            }
        }
    }
    let in_cycles: BTreeSet<Point> = g.orbits().finite_cycles.into_iter().flatten().collect();
    for r in 1..=n {
        for m in 1..=b {
            let x = Point::new(r, m);
            let moved_or_translated = g.eval(x) != x;
            if moved_or_translated && !in_cycles.contains(&x) {
                assert!(seen.contains(&x), "{x} lies on no traced orbit");
            }
        }
    }
    count
}

// lattice

fn lattice(dim: usize) -> impl Strategy<Value = LatticeBasis> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), dim)
        .prop_map(move |rows| LatticeBasis::new(dim, rows.into_iter().map(TranslationVector).collect()).unwrap())
        .prop_filter("finite index", |l| l.has_finite_index())
}

fn unimodular(dim: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0..dim, 0..dim, -2i64..=2), 0..6)
}

/// Number of cosets of L in Z^dim among the points of a box, counted directly.
fn brute_index(l: &LatticeBasis, bound: u64) -> u64 {
    let dim = l.dim();
    let mut reps: Vec<Vec<i64>> = Vec::new();
    let side = bound as i64;
    let total = side.pow(dim as u32);
    for code in 0..total {
        let mut v = Vec::with_capacity(dim);
        let mut c = code;
        for _ in 0..dim {
            v.push(c % side);
            c /= side;
        }
        let fresh = reps.iter().all(|r| {
            let diff: Vec<i64> = v.iter().zip(r).map(|(a, b)| a - b).collect();
            !l.contains(&TranslationVector(diff)).unwrap()
        });
        if fresh {
            reps.push(v);
        }
    }
    reps.len() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_idempotent_and_index_preserving(l in (1usize..=3).prop_flat_map(lattice)) {
        let h = l.hnf();
        prop_assert_eq!(h.hnf(), h.clone());
        prop_assert_eq!(h.index(), l.index());
        for row in l.rows() {
            prop_assert!(h.contains(row).unwrap());
            prop_assert!(l.contains(row).unwrap());
        }
    }

    #[test]
    fn index_matches_coset_count(l in (1usize..=2).prop_flat_map(lattice)) {
        let idx = l.index().unwrap();
        prop_assume!(idx <= 24);
        prop_assert_eq!(brute_index(&l, idx), idx);
    }

    #[test]
    fn parity_form_is_bilinear(
        u in prop::collection::vec(-3i64..=3, 3),
        v in prop::collection::vec(-3i64..=3, 3),
        w in prop::collection::vec(-3i64..=3, 3),
    ) {
        let (u, v, w) = (TranslationVector(u), TranslationVector(v), TranslationVector(w));
        let b = |x: &TranslationVector, y: &TranslationVector| parity_form(x, y).unwrap();
        prop_assert_eq!(b(&u, &v), b(&v, &u));
        prop_assert_eq!(b(&u, &u), 0);
        prop_assert_eq!(b(&u, &(&v + &w)), (b(&u, &v) + b(&u, &w)) % 2);
    }

    #[test]
    fn odd_pair_is_basis_independent(l in (2usize..=3).prop_flat_map(lattice), ops in unimodular(3)) {
        let mut rows: Vec<Vec<i64>> = l.rows().iter().map(|r| r.0.clone()).collect();
        let dim = rows.len();
        for (i, j, k) in ops {
            let (i, j) = (i % dim, j % dim);
            if i != j {
                let add: Vec<i64> = rows[j].iter().map(|x| x * k).collect();
                for (a, b) in rows[i].iter_mut().zip(add) {
                    *a += b;
                }
            }
        }
        let other = LatticeBasis::new(l.dim(), rows.into_iter().map(TranslationVector).collect()).unwrap();
        prop_assert_eq!(other.index(), l.index());
        prop_assert_eq!(other.has_odd_pair(), l.has_odd_pair());
        prop_assert_eq!(other.hnf(), l.hnf());
    }
}

/// The parity form against commutators of canonical preimages, exhaustively
/// for vectors with entries in [-3, 3] up to dimension 2, and on every pair
/// with entries in [-1, 1] in dimension 3.
#[test]
fn parity_form_matches_commutators() {
    let cases: [(usize, i64); 3] = [(1, 3), (2, 3), (3, 1)];
    for (dim, r) in cases {
        let side = 2 * r + 1;
        let vecs: Vec<TranslationVector> = (0..side.pow(dim as u32))
            .map(|mut c| {
                let mut v = Vec::new();
                for _ in 0..dim {
                    v.push(c % side - r);
                    c /= side;
                }
                TranslationVector(v)
            })
            .collect();
        let n = dim + 1;
        let hats: Vec<HoughtonElement> =
            vecs.iter().map(|v| HoughtonElement::canonical_preimage(n, v).unwrap()).collect();
        for i in 0..vecs.len() {
            for j in i..vecs.len() {
                let direct = HoughtonElement::commutator(&hats[i], &hats[j]).unwrap().parity_if_fsym().unwrap();
                assert_eq!(
                    u8::from(direct.is_odd()),
                    parity_form(&vecs[i], &vecs[j]).unwrap(),
                    "{} {}",
                    vecs[i],
                    vecs[j]
                );
            }
        }
    }
}

// finite engine

fn small_gens() -> impl Strategy<Value = (Vec<LinePerm>, Vec<i64>)> {
    (3i64..=6).prop_flat_map(|m| {
        let perm = prop::collection::vec((1..=m, 1..=m), 1..4).prop_map(|swaps| {
            swaps
                .into_iter()
                .filter(|(a, b)| a != b)
                .fold(LinePerm::identity(), |acc, (a, b)| acc.compose(&LinePerm::transposition(a, b)))
        });
        (prop::collection::vec(perm, 1..4), Just((1..=m).collect::<Vec<i64>>()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chain_matches_bfs((gens, window) in small_gens(), probe in prop::collection::vec((1i64..=6, 1i64..=6), 0..3)) {
        let chain = StabilizerChain::build(&gens, &window).unwrap();
        let bfs = BfsGroup::enumerate(&gens, &window, 100_000).unwrap();
        prop_assert_eq!(chain.order(), BigUint::from(bfs.order()));
        let m = *window.last().unwrap();
        let p = probe
            .into_iter()
            .filter(|(a, b)| a != b && *a <= m && *b <= m)
            .fold(LinePerm::identity(), |acc, (a, b)| acc.compose(&LinePerm::transposition(a, b)));
        prop_assert_eq!(chain.contains(&p).unwrap(), bfs.contains(&p).unwrap());
    }
}

#[test]
fn textbook_classifications() {
    for m in 3..=9i64 {
        let window: Vec<i64> = (1..=m).collect();
        let sym = vec![LinePerm::transposition(1, 2), LinePerm::cycle(&window).unwrap()];
        let alt: Vec<LinePerm> = (3..=m).map(|i| LinePerm::cycle(&[1, 2, i]).unwrap()).collect();
        assert_eq!(gen_class(&sym, &window).unwrap(), GenClass::ContainsAltFullSym, "Sym({m})");
        assert_eq!(gen_class(&alt, &window).unwrap(), GenClass::ContainsAltOnly, "Alt({m})");
        if m >= 4 {
            let proper = vec![LinePerm::transposition(1, 2), LinePerm::transposition(3, 4)];
            assert_eq!(gen_class(&proper, &window).unwrap(), GenClass::Proper);
        }
    }
}

// classification

fn descriptor() -> impl Strategy<Value = SubgroupDescriptor> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let m = n - 1;
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, m), m),
                any::<bool>(),
                prop::collection::vec(any::<bool>(), m),
            )
        })
        .prop_filter_map("valid descriptor", |(n, rows, alt, twists)| {
            let l = LatticeBasis::new(n - 1, rows.into_iter().map(TranslationVector).collect()).ok()?;
            if !l.has_finite_index() || l.index()? > 12 {
                return None;
            }
            let (sym, tw) = if alt && !l.has_odd_pair() { (SymType::Alt, twists) } else { (SymType::Fsym, Vec::new()) };
            let d = SubgroupDescriptor::new(n, l, sym, tw);
            d.validate().ok()?;
            Some(d)
        })
}

fn member(d: &SubgroupDescriptor, coeffs: &[i64], swaps: &[(i64, i64)]) -> HoughtonElement {
    let n = d.n();
    let mut g = d.word(&coeffs[..n - 1]).unwrap();
    for &(a, b) in swaps {
        let (x, y) = (Point::new(1, a), Point::new(1, b + 10));
        // a 3-cycle is always even, a transposition only in the fsym type
        let p = if d.sym_type() == SymType::Alt {
            RayPerm::cycle(&[x, y, Point::new(1, 30)]).unwrap()
        } else {
            RayPerm::transposition(x, y)
        };
        g = g.mul(&HoughtonElement::from_finitary(n, &p).unwrap()).unwrap();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn membership_is_closed(
        d in descriptor(),
        c1 in prop::collection::vec(-2i64..=2, 3),
        c2 in prop::collection::vec(-2i64..=2, 3),
        s1 in prop::collection::vec((1i64..=5, 1i64..=5), 0..3),
        s2 in prop::collection::vec((1i64..=5, 1i64..=5), 0..3),
    ) {
        let (a, b) = (member(&d, &c1, &s1), member(&d, &c2, &s2));
        prop_assert!(d.contains(&a).unwrap());
        prop_assert!(d.contains(&b).unwrap());
        prop_assert!(d.contains(&a.mul(&b).unwrap()).unwrap());
        prop_assert!(d.contains(&a.inv()).unwrap());
        let eps = HoughtonElement::from_finitary(d.n(), &epsilon()).unwrap();
        prop_assert_eq!(d.contains(&a.mul(&eps).unwrap()).unwrap(), d.sym_type() == SymType::Fsym);
    }

    #[test]
    fn index_matches_coset_sampling(d in descriptor()) {
        let n = d.n();
        let idx = d.lattice().index().unwrap();
        let eps = HoughtonElement::from_finitary(n, &epsilon()).unwrap();
        let mut samples = Vec::new();
        let side = idx as i64;
        for code in 0..side.pow((n - 1) as u32) {
            let mut v = Vec::new();
            let mut c = code;
            for _ in 0..n - 1 {
                v.push(c % side);
                c /= side;
            }
            let h = HoughtonElement::canonical_preimage(n, &TranslationVector(v)).unwrap();
            samples.push(eps.mul(&h).unwrap());
            samples.push(h);
        }
        let mut reps: Vec<HoughtonElement> = Vec::new();
        for g in samples {
            let fresh = reps.iter().all(|r| !d.contains(&g.mul(&r.inv()).unwrap()).unwrap());
            if fresh {
                reps.push(g);
            }
        }
        prop_assert_eq!(reps.len() as u64, d.index().unwrap());
    }

    #[test]
    fn normal_form_describes_the_same_subgroup(d in descriptor(), c in prop::collection::vec(-2i64..=2, 3)) {
        let nf = d.normalize().unwrap();
        prop_assume!(d.lattice().diagonal_form().unwrap().is_none());
        let g = member(&d, &c, &[]);
        prop_assert!(nf.descriptor.contains(&g).unwrap());
        prop_assert_eq!(nf.descriptor.index().unwrap(), d.index().unwrap());
    }
}

#[test]
fn diagonal_consistency() {
    for n in 2..=5usize {
        let m = n - 1;
        let mut c = vec![1i64; m];
        loop {
            for sym in [SymType::Fsym, SymType::Alt] {
                let d = SubgroupDescriptor::diagonal(&c, sym, Vec::new());
                if d.violation().is_some() {
                    assert!(sym == SymType::Alt && c.iter().filter(|x| *x % 2 == 1).count() >= 2);
                    continue;
                }
                let odd = c.iter().filter(|x| *x % 2 == 1).count();
                let rule = if n == 2 {
                    2
                } else if sym == SymType::Alt || odd >= 2 {
                    n - 1
                } else {
                    n
                };
                assert_eq!(d.d().unwrap(), rule, "{d}");
            }
            // next tuple with entries in 1..=6
            let mut i = 0;
            while i < m && c[i] == 6 {
                c[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
            c[i] += 1;
        }
    }
}

#[test]
fn translation_elements_have_no_finite_cycles() {
    for s in ["n=3; L=1,1;1,-1; type=fsym", "n=3; L=2,1;0,3; type=alt", "n=4; L=2,0,0;0,2,0;1,1,1; type=fsym"] {
        let d = SubgroupDescriptor::parse(s).unwrap();
        let data = choose_translation_elements(&d).unwrap();
        for (i, f) in data.f.iter().enumerate() {
            assert!(f.orbits().finite_cycles.is_empty(), "{s}: f_{}", i + 2);
            assert!(d.contains(f).unwrap());
            for x in &data.f_sets[i] {
                assert_eq!(f.eval(*x), *x);
            }
        }
        let els = sweep_elements(&d, &data).unwrap();
        let targets: Vec<Point> = data.f_union.iter().copied().chain([Point::new(2, 3), Point::new(3, 1)]).collect();
        let sweep = sweep_into_ray1(&els, &targets).unwrap();
        for x in &targets {
            let y = sweep.element.eval(*x);
            assert!(y.ray == 1 && !data.f_union.contains(&y), "{s}: {x} -> {y}");
        }
    }
}

#[test]
fn decomposition_parity_of_odd_finitary_element() {
    let g = HoughtonElement::from_finitary(3, &epsilon()).unwrap();
    let (sigma, v) = g.decompose().unwrap();
    assert!(v.is_zero());
    assert_eq!(sigma.parity(), Parity::Odd);
}
