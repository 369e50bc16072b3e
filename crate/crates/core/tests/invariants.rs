//! Property tests for the structural invariants of the engine.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use adlv::adlv_engine::{ClassContext, Orientation};
use adlv::hecke::{HeckeAlgebra, HeckeElt, Poly};
use adlv::lattice::Q;
use adlv::{DatumSpec, ExtAffWeylElt, Family, RootDatum, Variant};
use proptest::prelude::*;

fn data() -> &'static [RootDatum] {
    static D: OnceLock<Vec<RootDatum>> = OnceLock::new();
    D.get_or_init(|| {
        [
            (Family::A, 1, Variant::Adjoint),
            (Family::A, 2, Variant::SimplyConnected),
            (Family::A, 2, Variant::Adjoint),
            (Family::C, 2, Variant::SimplyConnected),
            (Family::C, 2, Variant::Adjoint),
            (Family::G, 2, Variant::SimplyConnected),
            (Family::GL, 2, Variant::GL),
            (Family::GL, 3, Variant::GL),
            (Family::B, 3, Variant::SimplyConnected),
        ]
        .into_iter()
        .map(|(f, n, v)| RootDatum::build(DatumSpec::new(f, n, v)).unwrap())
        .collect()
    })
}

/// A random word in the affine generators followed by a random Ω element.
fn elt(d: &RootDatum, word: &[u8], tau: usize) -> ExtAffWeylElt {
    let om = &d.omega_group().reps;
    let w: Vec<u8> = word.iter().map(|&g| g % d.gens.len() as u8).collect();
    d.eval_word(&w, &om[tau % om.len()])
}

fn word(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 0..=max)
}

/// Bruhat order from the subword criterion on one reduced word of y.
fn subword_leq(d: &RootDatum, x: &ExtAffWeylElt, y: &ExtAffWeylElt) -> bool {
    let r = d.reduced_word(y);
    let n = r.word.len();
    (0..1u32 << n).any(|mask| {
        let sub: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| r.word[i]).collect();
        d.eval_word(&sub, &r.tau) == *x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_axioms(di in 0usize..9, a in word(10), b in word(10), c in word(10), t in 0usize..8) {
        let d = &data()[di];
        let (x, y, z) = (elt(d, &a, t), elt(d, &b, t + 1), elt(d, &c, 0));
        prop_assert_eq!(d.mul(&d.mul(&x, &y), &z), d.mul(&x, &d.mul(&y, &z)));
        prop_assert_eq!(d.mul(&x, &d.inverse(&x)), ExtAffWeylElt::IDENTITY);
        prop_assert_eq!(d.length(&x), d.length(&d.inverse(&x)));
    }

    #[test]
    fn k_symmetry_and_length(di in 0usize..9, a in word(14), t in 0usize..8) {
        let d = &data()[di];
        let x = elt(d, &a, t);
        for r in 0..d.nroots() {
            prop_assert_eq!(d.k_alpha(d.neg_root(r), &x), 1 - d.k_alpha(r, &x));
        }
        prop_assert_eq!(d.length(&x), d.length_closed_form(&x));
        let r = d.reduced_word(&x);
        prop_assert_eq!(r.word.len() as u32, d.length(&x));
        prop_assert!(d.is_length_zero(&r.tau));
        prop_assert_eq!(d.eval_word(&r.word, &r.tau), x);
        prop_assert!(r.word.len() <= a.len());
    }

    #[test]
    fn ascents_match_length(di in 0usize..9, a in word(12), t in 0usize..8) {
        let d = &data()[di];
        let x = elt(d, &a, t);
        for g in 0..d.gens.len() {
            let up = d.length(&d.mul_gen(&x, g)) > d.length(&x);
            prop_assert_eq!(d.is_right_ascent(&x, g), up);
            let left_down = d.length(&d.gen_mul(g, &x)) < d.length(&x);
            prop_assert_eq!(d.is_left_descent(&x, g), left_down);
        }
    }

    #[test]
    fn bruhat_matches_subwords(di in 0usize..6, a in word(7), b in word(7), t in 0usize..8) {
        let d = &data()[di];
        let (x, y) = (elt(d, &a, t), elt(d, &b, t));
        prop_assert_eq!(d.bruhat_leq(&x, &y), subword_leq(d, &x, &y));
        prop_assert_eq!(d.bruhat_leq(&y, &x), subword_leq(d, &y, &x));
    }

    #[test]
    fn hecke_associativity(di in 0usize..6, a in word(4), b in word(4), c in word(4)) {
        let d = &data()[di];
        let h = HeckeAlgebra::new(d);
        let (x, y, z) = (elt(d, &a, 0), elt(d, &b, 1), elt(d, &c, 0));
        let (tx, ty, tz) = (HeckeElt::basis(x), HeckeElt::basis(y), HeckeElt::basis(z));
        prop_assert_eq!(h.mul(&h.mul(&tx, &ty), &tz), h.mul(&tx, &h.mul(&ty, &tz)));
        // Structure constants are non-negative in powers of q − 1.
        for p in h.mul_basis(&x, &y).terms.values() {
            prop_assert!(p.in_q_minus_one().iter().all(|&c| c >= 0));
        }
        // Length-additive products are a single basis element.
        if d.length(&d.mul(&x, &y)) == d.length(&x) + d.length(&y) {
            prop_assert_eq!(h.mul_basis(&x, &y), HeckeElt { terms: [(d.mul(&x, &y), Poly::one())].into() });
        }
    }

    #[test]
    fn class_invariants(di in 0usize..9, a in word(10), b in word(6), t in 0usize..8) {
        let d = &data()[di];
        let (x, y) = (elt(d, &a, t), elt(d, &b, t + 3));
        let c = d.classify(&x).unwrap();
        prop_assert_eq!(&d.classify(&d.conjugate(&y, &x)).unwrap(), &c);
        prop_assert!(d.is_dominant_rat(&c.newton));
        prop_assert_eq!(&c.kappa, &d.eta_g(&x));
        prop_assert_eq!(&d.classify(&d.standard_representative(&c)).unwrap(), &c);
        let key = d.class_key(&c);
        prop_assert_eq!(&d.parse_class_key(&key).unwrap(), &c);
        let (f, p) = d.fundamental_representative(&c).unwrap();
        prop_assert!(d.is_fundamental_p_alcove(&f, &p));
    }

    #[test]
    fn parse_round_trip(di in 0usize..9, a in word(10), t in 0usize..8) {
        let d = &data()[di];
        let x = elt(d, &a, t);
        prop_assert_eq!(d.parse_elt(&d.fmt_elt(&x)).unwrap(), x);
        prop_assert_eq!(d.parse_elt(&d.fmt_reduced(&d.reduced_word(&x))).unwrap(), x);
    }

    #[test]
    fn omega_p_monoid(di in 0usize..9, a in word(8), b in word(8), t in 0usize..8, pi in 0usize..64) {
        let d = &data()[di];
        let ps = d.semistandard_parabolics();
        let p = &ps[pi % ps.len()];
        let (x, y) = (elt(d, &a, t), elt(d, &b, t + 1));
        let (Ok(x), Ok(y)) = (d.omega_part_in(&x, &p.levi), d.omega_part_in(&y, &p.levi)) else { return Ok(()) };
        if d.is_fundamental_p_alcove(&x, p) && d.is_fundamental_p_alcove(&y, p) {
            let xy = d.mul(&x, &y);
            prop_assert!(d.is_fundamental_p_alcove(&xy, p));
            prop_assert_eq!(d.length(&xy), d.length(&x) + d.length(&y));
            prop_assert_eq!(Q::from_integer(d.length(&x) as i64), d.nu_x(&x, &p.levi).unwrap().pair(&p.two_rho_n));
        }
    }

    #[test]
    fn periodic_tables_are_hecke_degrees(di in 0usize..6, a in word(6), b in word(4)) {
        let d = &data()[di];
        let g = d.standard_parabolic(&(0..d.ss_rank()).collect::<Vec<_>>());
        let (x, w) = (elt(d, &a, 0), elt(d, &b, 1));
        let t = d.orbit_dim_table(&x, &g, &w, Orientation::Periodic).unwrap();
        let h = HeckeAlgebra::new(d);
        for (y, e) in &t.entries {
            let u = d.mul(&d.inverse(y), &d.inverse(&w));
            prop_assert_eq!(h.structure_deg(&x, &u, &d.inverse(&w)), Some(*e));
        }
    }

    #[test]
    fn acute_cones_cover_regions(di in 0usize..9, a in word(10), t in 0usize..8, pi in 0usize..64) {
        let d = &data()[di];
        let ps = d.semistandard_parabolics();
        let p = &ps[pi % ps.len()];
        let x = elt(d, &a, t);
        let rhs = d.weyl.elements().filter(|&w| p.contains_borel(d, w)).any(|w| d.acute_cone_contains(&x, w));
        prop_assert_eq!(d.in_region_p(&x, p), rhs);
    }
}

#[test]
fn length_is_gallery_distance() {
    // Breadth-first search over alcoves from the identity.
    for d in data().iter().take(6) {
        let mut dist: HashMap<ExtAffWeylElt, u32> = HashMap::from([(ExtAffWeylElt::IDENTITY, 0)]);
        let mut q = VecDeque::from([ExtAffWeylElt::IDENTITY]);
        while let Some(z) = q.pop_front() {
            let k = dist[&z];
            if k == 7 {
                continue;
            }
            for g in 0..d.gens.len() {
                let zs = d.mul_gen(&z, g);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(zs) {
                    e.insert(k + 1);
                    q.push_back(zs);
                }
            }
        }
        for (z, k) in &dist {
            assert_eq!(d.length(z), *k, "{} at {}", d.label, d.fmt_elt(z));
        }
        let ball: BTreeSet<_> = d.ball_in_component(7, &ExtAffWeylElt::IDENTITY).into_iter().collect();
        assert_eq!(ball, dist.keys().copied().collect());
    }
}

#[test]
fn stratum_dimensions_are_nonnegative_integers() {
    let d = &data()[3];
    for c in d.enumerate_classes(6, 0) {
        let ctx = ClassContext::new(d, &c);
        for x in d.ball(5) {
            for w in d.ball(4) {
                ctx.dim_stratum(&x, &w).unwrap();
            }
        }
    }
}
