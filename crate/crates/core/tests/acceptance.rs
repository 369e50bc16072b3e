//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use adlv::adlv_engine::{ClassContext, NecessaryCondition, Orientation, PalcovePrediction, Prediction};
use adlv::hecke::{HeckeAlgebra, HeckeElt};
use adlv::lattice::Q;
use adlv::root_data::{dot, RatCw};
use adlv::{DatumSpec, ExtAffWeylElt, Family, RootDatum, Variant};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn datum(f: Family, n: usize, v: Variant) -> RootDatum {
    RootDatum::build(DatumSpec::new(f, n, v)).expect("datum")
}

fn sc(f: Family, n: usize) -> RootDatum {
    datum(f, n, Variant::SimplyConnected)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

/// SL3, b = t[2,0,-2], x = s01210120120: x ≥ b, no proper P-alcove, nothing up to cutoff 12.
fn c1() -> Outcome {
    let d = sc(Family::A, 2);
    let x = d.parse_elt("s01210120120").map_err(|e| e.to_string())?;
    let y = d.parse_elt("t[3,1,-4]·s1s2s1").map_err(|e| e.to_string())?;
    check(x == y, || format!("presentations differ: {} vs {}", d.fmt_elt(&x), d.fmt_elt(&y)))?;
    check(d.length(&x) == 11, || format!("length {}", d.length(&x)))?;
    let b = d.parse_elt("t[2,0,-2]").unwrap();
    check(d.bruhat_leq(&b, &x), || "b ≤ x fails".into())?;
    for p in d.semistandard_parabolics() {
        if !p.is_group(&d) {
            check(!d.is_p_alcove(&x, p, false).verdict, || format!("P-alcove for {}", p.describe(&d)))?;
        }
    }
    let c = d.classify(&b).unwrap();
    let r = d.solve(&x, &c, Some(12)).map_err(|e| e.to_string())?;
    check(!r.is_nonempty(), || format!("solve found {:?}", r.status))?;
    Ok(format!("x = {}, status {}, swept {}", d.fmt_elt(&x), r.status_name(), r.swept))
}

/// SL3, ν̄ = (1,-1/2,-1/2), x = t[μ]·s1s2s1 a ^{s1}P_{α2}-alcove: the η_M test passes exactly for four μ.
fn c2() -> Outcome {
    let d = sc(Family::A, 2);
    let c = d
        .enumerate_classes(4, 0)
        .into_iter()
        .find(|c| d.class_key(c) == "nu=[1,-1/2,-1/2];kappa=0")
        .ok_or("class (1,-1/2,-1/2) not enumerated")?;
    let ctx = ClassContext::new(&d, &c);
    let p = d.parabolic(d.simple_reflection(0), &[1]);
    let w = d.parse_elt("s1s2s1").unwrap().w;
    let mut passing = BTreeSet::new();
    let mut full_passing = BTreeSet::new();
    let mut alcoves = 0;
    for a in -8..=8i64 {
        for b in -8..=8i64 {
            let mu = [a, b, -a - b];
            let lam = d.from_display_coords(&mu).unwrap();
            let x = ExtAffWeylElt::new(lam, w);
            if !d.p_alcove(&x, &p, false) {
                continue;
            }
            alcoves += 1;
            if ctx.necessary_condition_for(&x, &p) {
                passing.insert(mu.to_vec());
            }
            if ctx.necessary_condition(&x) == NecessaryCondition::Passed {
                full_passing.insert(mu.to_vec());
            }
        }
    }
    let expected: BTreeSet<Vec<i64>> =
        [[-1, 1, 0], [0, 1, -1], [1, 1, -2], [2, 1, -3]].iter().map(|v| v.to_vec()).collect();
    check(passing == expected, || format!("passing set {passing:?}"))?;
    Ok(format!("{alcoves} P-alcoves scanned, {} pass the P-test, {} pass all P", passing.len(), full_passing.len()))
}

/// Translations: X_{ε^λ}(b) ≠ ∅ iff [b] = [ε^λ].
fn c3() -> Outcome {
    let mut summary = Vec::new();
    for d in [sc(Family::A, 2), sc(Family::C, 2)] {
        let classes = d.enumerate_classes(12, 0);
        let mut lams = BTreeSet::new();
        for x in d.ball(12) {
            let t = ExtAffWeylElt::translation(x.lambda);
            if d.length(&t) <= 12 {
                lams.insert(t);
            }
        }
        let ctxs: Vec<ClassContext> = classes.iter().map(|c| ClassContext::new(&d, c)).collect();
        let mut undecided = 0;
        for t in &lams {
            let own = d.classify(t).unwrap();
            for ctx in &ctxs {
                let r = ctx.solve(t, None).map_err(|e| e.to_string())?;
                let want = ctx.class == own;
                if r.is_nonempty() != want {
                    return Err(format!("{}: x = {} class {} got {}", d.label, d.fmt_elt(t), d.class_key(&ctx.class), r.status_name()));
                }
                if !r.is_definite() {
                    undecided += 1;
                }
            }
        }
        summary.push(format!("{}: {} translations x {} classes ({} empty up to cutoff)", d.label, lams.len(), classes.len(), undecided));
    }
    Ok(summary.join("; "))
}

fn shrunken_sweep(d: &RootDatum, max_len: usize) -> Result<(usize, usize), String> {
    let c = d.classify(&ExtAffWeylElt::IDENTITY).unwrap();
    let ctx = ClassContext::new(d, &c);
    let mut n = 0;
    for x in d.ball(max_len) {
        if !d.is_shrunken(&x) {
            continue;
        }
        n += 1;
        let pred = ctx.predict_shrunken(&x).map_err(|e| e.to_string())?;
        let r = ctx.solve(&x, None).map_err(|e| e.to_string())?;
        let ok = match (&pred, r.dim()) {
            (Prediction::Empty, None) => true,
            (Prediction::NonEmpty { dim }, Some(k)) => *dim == Q::from_integer(k),
            _ => false,
        };
        if !ok {
            return Err(format!("{}: x = {} predicted {:?}, solve {:?}", d.label, d.fmt_elt(&x), pred, r.status));
        }
    }
    Ok((n, 0))
}

/// Shrunken chambers: solve agrees with the η₂⁻¹η₁η₂ rule for b = 1.
fn c4() -> Outcome {
    let (n, _) = shrunken_sweep(&sc(Family::C, 2), 14)?;
    let (m, _) = shrunken_sweep(&sc(Family::A, 3), 10)?;
    Ok(format!("C2: {n} shrunken x with ℓ ≤ 14; A3: {m} shrunken x with ℓ ≤ 10; 0 disagreements"))
}

/// Orbit tables for P = G against Hecke structure constants.
fn c5() -> Outcome {
    let mut summary = Vec::new();
    for d in [sc(Family::A, 2), sc(Family::C, 2)] {
        let g = d.standard_parabolic(&(0..d.ss_rank()).collect::<Vec<_>>());
        let h = HeckeAlgebra::new(&d);
        let ws = d.ball(6);
        let xs = d.ball(8);
        let mut checked = 0usize;
        for x in &xs {
            // T_x·T_u for every u up to ℓ(x) + 6, grown one generator at a time.
            let rmax = d.length(x) as usize + 6;
            let mut prods: HashMap<ExtAffWeylElt, HeckeElt> = HashMap::new();
            prods.insert(ExtAffWeylElt::IDENTITY, HeckeElt::basis(*x));
            let mut frontier = vec![ExtAffWeylElt::IDENTITY];
            for _ in 0..rmax {
                let mut next = Vec::new();
                for u in &frontier {
                    for gi in 0..d.gens.len() {
                        if !d.is_right_ascent(u, gi) {
                            continue;
                        }
                        let us = d.mul_gen(u, gi);
                        if prods.contains_key(&us) {
                            continue;
                        }
                        let p = h.right_mul_gen(&prods[u], gi);
                        prods.insert(us, p);
                        next.push(us);
                    }
                }
                frontier = next;
            }
            for w in &ws {
                let t = d.orbit_dim_table(x, &g, w, Orientation::Periodic).map_err(|e| e.to_string())?;
                let wi = d.inverse(w);
                let mut oracle = BTreeMap::new();
                for (u, p) in &prods {
                    if let Some(deg) = p.coeff(&wi).degree() {
                        // u = y⁻¹w⁻¹
                        let y = d.inverse(&d.mul(u, w));
                        oracle.insert(y, deg);
                    }
                }
                if oracle != t.entries {
                    return Err(format!("{}: x = {}, w = {}: table {} entries, oracle {}", d.label, d.fmt_elt(x), d.fmt_elt(w), t.entries.len(), oracle.len()));
                }
                checked += t.entries.len();
            }
        }
        summary.push(format!("{}: {} x, {} w, {} entries", d.label, xs.len(), ws.len(), checked));
    }
    Ok(summary.join("; "))
}

/// Fundamental P-alcove monoids: closure, additive length, ℓ = ⟨2ρ_N, ν_x⟩.
fn c6() -> Outcome {
    let mut summary = Vec::new();
    for d in [datum(Family::GL, 3, Variant::GL), datum(Family::GL, 4, Variant::GL), sc(Family::C, 2), datum(Family::C, 2, Variant::Adjoint)] {
        let mut total = 0;
        for p in d.semistandard_parabolics() {
            let om = d.omega_elements(&p.levi);
            let k = om.central.len();
            let mut elts = Vec::new();
            let ranges: Vec<i64> = (-4..=4).collect();
            let mut coefs = vec![vec![]];
            for _ in 0..k {
                coefs = coefs.iter().flat_map(|v: &Vec<i64>| ranges.iter().map(move |&c| [v.clone(), vec![c]].concat())).collect();
            }
            for rep in &om.reps {
                for cf in &coefs {
                    let mut lam = rep.lambda;
                    for (c, z) in cf.iter().zip(&om.central) {
                        for i in 0..d.dim {
                            lam[i] += c * z[i];
                        }
                    }
                    let x = ExtAffWeylElt::new(lam, rep.w);
                    if d.display_coords(&x.lambda).iter().any(|v| v.abs() > 4) {
                        continue;
                    }
                    if d.is_fundamental_p_alcove(&x, p) {
                        elts.push(x);
                    }
                }
            }
            for x in &elts {
                let nu = d.nu_x(x, &p.levi).map_err(|e| e.to_string())?;
                check(Q::from_integer(d.length(x) as i64) == nu.pair(&p.two_rho_n), || {
                    format!("{}: ℓ ≠ ⟨2ρ_N, ν⟩ at {}", d.label, d.fmt_elt(x))
                })?;
                for y in &elts {
                    let xy = d.mul(x, y);
                    check(d.is_fundamental_p_alcove(&xy, p), || format!("{}: {}·{} not in the monoid", d.label, d.fmt_elt(x), d.fmt_elt(y)))?;
                    check(d.length(&xy) == d.length(x) + d.length(y), || format!("{}: length not additive", d.label))?;
                }
            }
            total += elts.len();
        }
        summary.push(format!("{}: {total}", d.label));
    }
    Ok(format!("elements checked per datum: {}", summary.join(", ")))
}

/// Region cut out by R_N equals the union of acute cones of Borels in P.
fn c7() -> Outcome {
    let mut summary = Vec::new();
    for d in [sc(Family::C, 2), sc(Family::G, 2)] {
        let xs = d.ball(10);
        let ps = d.semistandard_parabolics();
        for p in ps {
            let ws: Vec<u16> = d.weyl.elements().filter(|&w| p.contains_borel(&d, w)).collect();
            for x in &xs {
                let lhs = d.in_region_p(x, p);
                let rhs = ws.iter().any(|&w| d.acute_cone_contains(x, w));
                check(lhs == rhs, || format!("{}: {} at {}", d.label, p.describe(&d), d.fmt_elt(x)))?;
            }
        }
        summary.push(format!("{}: {} alcoves x {} parabolics", d.label, xs.len(), ps.len()));
    }
    Ok(summary.join("; "))
}

/// A2, b = 1: max over the double coset WtμW equals ⟨ρ, μ⟩ + ℓ(w₀).
fn c8() -> Outcome {
    let d = sc(Family::A, 2);
    let c = d.classify(&ExtAffWeylElt::IDENTITY).unwrap();
    let ctx = ClassContext::new(&d, &c);
    let w0 = d.weyl.len[d.longest() as usize] as i64;
    let mut report = Vec::new();
    for a in 0..=8i64 {
        for b in -8..=8i64 {
            let mu = d.from_display_coords(&[a, b, -a - b]).unwrap();
            if !d.is_dominant_rat(&RatCw::integral(mu)) || dot(&d.two_rho, &mu) > 8 {
                continue;
            }
            let mut coset = BTreeSet::new();
            for u in d.weyl.elements() {
                for v in d.weyl.elements() {
                    coset.insert(d.product(&[ExtAffWeylElt::finite(u), ExtAffWeylElt::translation(mu), ExtAffWeylElt::finite(v)]));
                }
            }
            let mut best = None;
            for x in &coset {
                let r = ctx.solve(x, None).map_err(|e| e.to_string())?;
                best = best.max(r.dim());
            }
            let want = dot(&d.two_rho, &mu) / 2 + w0;
            check(best == Some(want), || format!("μ = {}: max {best:?}, expected {want}", d.fmt_coweight(&mu)))?;
            report.push(format!("{}↦{want}", d.fmt_coweight(&mu)));
        }
    }
    Ok(report.join(" "))
}

/// Classification round trips, η_G on Ω_G, and the defect of GL_n basic classes.
fn c9() -> Outcome {
    let data = [
        sc(Family::A, 1),
        datum(Family::A, 1, Variant::Adjoint),
        sc(Family::A, 2),
        datum(Family::A, 2, Variant::Adjoint),
        datum(Family::GL, 3, Variant::GL),
        sc(Family::C, 2),
        datum(Family::C, 2, Variant::Adjoint),
    ];
    let mut n = 0;
    for d in &data {
        for c in d.enumerate_classes(8, 2) {
            let b = d.standard_representative(&c);
            let back = d.classify(&b).map_err(|e| e.to_string())?;
            check(back == c, || format!("{}: {} round trip", d.label, d.class_key(&c)))?;
            n += 1;
        }
        let om = d.omega_group();
        let distinct: BTreeSet<_> = om.classes.iter().collect();
        check(distinct.len() == om.reps.len(), || format!("{}: η_G not injective on Ω", d.label))?;
        for (r, k) in om.reps.iter().zip(&om.classes) {
            check(d.is_length_zero(r) && d.eta_g(r) == *k, || format!("{}: bad Ω rep", d.label))?;
        }
        if let Some(order) = d.lambda_g.order() {
            check(order as usize == om.reps.len(), || format!("{}: |Ω| = {} but |Λ| = {order}", d.label, om.reps.len()))?;
        }
    }
    for nn in [2usize, 3] {
        let d = datum(Family::GL, nn, Variant::GL);
        for k in -5..=5i64 {
            let mut lam = [0; 6];
            lam[0] = k;
            let c = d.basic_class(&d.lambda_g.class(&lam));
            let g = num_gcd(nn as i64, k) as usize;
            check(d.defect(&c) == nn - g, || format!("GL{nn}, κ = {k}: defect {}", d.defect(&c)))?;
        }
    }
    Ok(format!("{n} classes round-trip; Ω ≅ Λ_G; GL2/GL3 defects n − gcd(n, κ)"))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { num_gcd(b, a % b) }
}

/// C2 adjoint, b basic with κ ≠ 0: solve, superset and the P-alcove rule agree.
fn c10() -> Outcome {
    let d = datum(Family::C, 2, Variant::Adjoint);
    let om = d.omega_group();
    let kappa = om.classes.iter().find(|k| k.0.iter().any(|&v| v != 0)).ok_or("Λ_G trivial")?.clone();
    let c = d.basic_class(&kappa);
    let ctx = ClassContext::new(&d, &c);
    let sup = ctx.superset(10).map_err(|e| e.to_string())?;
    let (mut definite, mut resolved, mut nonempty) = (0, 0, 0);
    for x in d.ball(10) {
        let r = ctx.solve(&x, None).map_err(|e| e.to_string())?;
        let in_sup = sup.contains(&x);
        let pal = matches!(ctx.predict_palcove(&x).map_err(|e| e.to_string())?, PalcovePrediction::NonEmptyPredicted);
        if !r.is_definite() {
            if in_sup {
                resolved += 1;
                eprintln!("criterion 10: {} empty up to cutoff {} but in the superset", d.fmt_elt(&x), r.cutoff);
            }
            continue;
        }
        definite += 1;
        let ne = r.is_nonempty();
        nonempty += usize::from(ne);
        check(ne == in_sup && ne == pal, || {
            format!("x = {}: solve {}, superset {in_sup}, P-alcove rule {pal}", d.fmt_elt(&x), r.status_name())
        })?;
    }
    Ok(format!("{definite} definite ({nonempty} non-empty), {resolved} resolved by superset, superset size {}", sup.len()))
}

/// Non-basic versus basic dimension difference for A2, [b] = [t[1,0,-1]].
fn c11() -> Outcome {
    let d = sc(Family::A, 2);
    let b = d.classify(&d.parse_elt("t[1,0,-1]").unwrap()).unwrap();
    let bb = d.basic_class(&b.kappa);
    let (cb, cbb) = (ClassContext::new(&d, &b), ClassContext::new(&d, &bb));
    let target = -(d.two_rho_pair(&b.newton) + Q::from_integer(d.defect(&b) as i64 - d.defect(&bb) as i64)) / Q::from_integer(2);
    let (mut both, mut hits) = (0, 0);
    for x in d.ball(12) {
        let l = d.length(&x);
        if !(6..=12).contains(&l) {
            continue;
        }
        let (r1, r2) = (cb.solve(&x, None).map_err(|e| e.to_string())?, cbb.solve(&x, None).map_err(|e| e.to_string())?);
        if let (Some(a), Some(b)) = (r1.dim(), r2.dim()) {
            both += 1;
            hits += usize::from(Q::from_integer(a - b) == target);
        }
    }
    let frac = if both == 0 { 0.0 } else { hits as f64 / both as f64 };
    Ok(format!("report only: {hits}/{both} = {frac:.3} of x with both non-empty have difference {target}"))
}

fn main() {
    let crits: [Criterion; 11] = [
        (1, "SL3 non-P-alcove example is empty", c1),
        (2, "SL3 η_M obstruction passes for exactly four μ", c2),
        (3, "translation criterion on A2 and C2", c3),
        (4, "shrunken-chamber rule for b = 1", c4),
        (5, "orbit tables equal Hecke degrees", c5),
        (6, "fundamental P-alcove monoid properties", c6),
        (7, "acute-cone decomposition", c7),
        (8, "double coset maximum for b = 1", c8),
        (9, "classification integrity", c9),
        (10, "method cross-agreement on C2", c10),
        (11, "dimension-difference spot report", c11),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (n, name, f) in crits {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("acceptance {n:>2} PASS [{secs:.1}s] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("acceptance {n:>2} FAIL [{secs:.1}s] {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
