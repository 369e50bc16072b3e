//! The decision core. Orbit-intersection dimensions are computed by folding a
//! reduced gallery for x against the orbits of ^{w⁻¹}(I_M N); stratum
//! dimensions, the sweep over w, the superset method, the Levi reduction and
//! the conjectural predictions are built on top of that.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::affine_weyl::ExtAffWeylElt;
use crate::hecke::HeckeAlgebra;
use crate::lattice::{fmt_q, Q};
use crate::root_data::{Levi, Parabolic, RatCw, RootDatum, WId};
use crate::sigma_classes::SigmaConjClass;
use crate::Error;

/// Which family of orbits the table measures against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Orbits of ^{w⁻¹}(I_M N).
    Periodic,
    /// Orbits of ^{w⁻¹}N, for finite w ∈ ᴹW; entries only for y ∈ W̃_{M′}.
    AtInfinity,
}

/// y ↦ dim(I𝐚_x ∩ orbit(y)).
#[derive(Clone, Debug)]
pub struct OrbitDimTable {
    pub x: ExtAffWeylElt,
    pub parabolic: Parabolic,
    pub twist: ExtAffWeylElt,
    pub orientation: Orientation,
    pub entries: BTreeMap<ExtAffWeylElt, u32>,
}

/// Evidence for an emptiness claim.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Certificate {
    /// `eta_g` (η_G mismatch) or `p_alcove` (η_M obstruction).
    pub kind: String,
    pub parabolic: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    NonEmpty { dim: i64, witness_w: ExtAffWeylElt },
    EmptyCertified(Certificate),
    EmptyUpToCutoff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdlvResult {
    pub status: Status,
    pub cutoff: usize,
    /// Number of w examined.
    pub swept: usize,
}

impl AdlvResult {
    pub fn is_nonempty(&self) -> bool {
        matches!(self.status, Status::NonEmpty { .. })
    }

    pub fn dim(&self) -> Option<i64> {
        match self.status {
            Status::NonEmpty { dim, .. } => Some(dim),
            _ => None,
        }
    }

    /// Non-empty or certified empty.
    pub fn is_definite(&self) -> bool {
        !matches!(self.status, Status::EmptyUpToCutoff)
    }

    pub fn status_name(&self) -> &'static str {
        match self.status {
            Status::NonEmpty { .. } => "nonempty",
            Status::EmptyCertified(_) => "empty-certified",
            Status::EmptyUpToCutoff => "empty-up-to-cutoff",
        }
    }
}

/// Outcome of the η_M obstruction scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessaryCondition {
    Passed,
    Violated(Certificate),
}

/// Conjectural prediction from the shrunken-chamber rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prediction {
    Empty,
    NonEmpty { dim: Q },
}

/// Prediction from the P-alcove obstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PalcovePrediction {
    Empty { witness: String },
    NonEmptyPredicted,
}

/// Outcome of the Levi reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceResult {
    pub dim: Option<i64>,
    /// False when some recursive call stopped at its cutoff.
    pub definite: bool,
}

/// Precomputed data of one M-dominant conjugate ν′ of ν̄ for one parabolic.
struct NuData {
    m2: Levi,
    nu: RatCw,
    gens: Vec<Vec<Q>>,
}

/// A class together with everything the engine needs for it.
pub struct ClassContext<'a> {
    pub d: &'a RootDatum,
    pub class: SigmaConjClass,
    /// Standard representative.
    pub b: ExtAffWeylElt,
    pub parabolic: Parabolic,
    /// ⟨ρ, ν + ν_dom⟩.
    pub correction: Q,
    nec: Vec<Vec<NuData>>,
}

impl<'a> ClassContext<'a> {
    pub fn new(d: &'a RootDatum, class: &SigmaConjClass) -> Self {
        let b = d.standard_representative(class);
        let parabolic = d.home_parabolic(class);
        let nu = d.average_translation(&b);
        let nu_dom = d.dominant_conjugate(&nu).0;
        let correction = nu.add(&nu_dom).pair(&d.two_rho) / Q::from_integer(2);
        let mut orbit: Vec<RatCw> = d.weyl.elements().map(|w| d.weyl_act_rat(w, &class.newton)).collect();
        orbit.sort();
        orbit.dedup();
        let nec = d
            .semistandard_parabolics()
            .iter()
            .map(|p| {
                let m = &p.levi;
                orbit
                    .iter()
                    .filter(|v| m.simple_m.iter().all(|&a| v.pair(&d.roots[a]) >= Q::zero()))
                    .map(|v| {
                        let roots2: Vec<usize> = m.roots.iter().copied().filter(|&a| v.pair(&d.roots[a]).is_zero()).collect();
                        let m2 = d.levi(roots2);
                        let gens = m
                            .simple_m
                            .iter()
                            .map(|&a| d.average_levi(&RatCw::integral(d.coroots[a]), &m2).coords(d.dim))
                            .collect();
                        NuData { m2, nu: *v, gens }
                    })
                    .collect()
            })
            .collect();
        ClassContext { d, class: class.clone(), b, parabolic, correction, nec }
    }

    /// η_M(x) ∈ η_M(Wν̄ ∩ 𝒩_M) for the parabolic with index `pi`.
    fn nec_holds(&self, x: &ExtAffWeylElt, pi: usize) -> bool {
        let d = self.d;
        self.nec[pi].iter().any(|nd| {
            let avg = d.average_levi(&RatCw::integral(x.lambda), &nd.m2);
            let t = nd.nu.sub(&avg).coords(d.dim);
            RootDatum::in_rational_lattice(&nd.gens, &t)
        })
    }

    /// The η_G test and the η_M obstruction over all P-alcoves of x.
    pub fn necessary_condition(&self, x: &ExtAffWeylElt) -> NecessaryCondition {
        let d = self.d;
        if d.eta_g(x) != self.class.kappa {
            return NecessaryCondition::Violated(Certificate {
                kind: "eta_g".into(),
                parabolic: None,
                detail: format!("eta_G(x) = {} but kappa = {}", d.lambda_g.display(&d.eta_g(x)), d.lambda_g.display(&self.class.kappa)),
            });
        }
        for (pi, p) in d.semistandard_parabolics().iter().enumerate() {
            if d.p_alcove(x, p, false) && !self.nec_holds(x, pi) {
                return NecessaryCondition::Violated(Certificate {
                    kind: "p_alcove".into(),
                    parabolic: Some(p.describe(d)),
                    detail: format!("eta_M(x) = {} is not the image of any M-class with Newton point in W.nu", p.levi.quotient.display(&p.levi.quotient.class(&x.lambda))),
                });
            }
        }
        NecessaryCondition::Passed
    }

    /// The obstruction for a single parabolic (for which x𝐚 need not be a P-alcove).
    pub fn necessary_condition_for(&self, x: &ExtAffWeylElt, p: &Parabolic) -> bool {
        let pi = self.d.semistandard_parabolics().iter().position(|q| q == p).expect("semistandard parabolic");
        self.d.eta_g(x) == self.class.kappa && self.nec_holds(x, pi)
    }

    /// ℓ(x) + ⟨2ρ, ν_dom⟩ + 2h.
    pub fn default_cutoff(&self, x: &ExtAffWeylElt) -> usize {
        let t = self.d.two_rho_pair(&self.class.newton).ceil().to_integer() as usize;
        self.d.length(x) as usize + t + 2 * self.d.coxeter_number()
    }

    fn stratum_from_entry(&self, entry: Option<u32>) -> Result<Option<i64>, Error> {
        let Some(e) = entry else { return Ok(None) };
        let v = Q::from_integer(e as i64) - self.correction;
        if !v.is_integer() || v < Q::zero() {
            return Err(Error::Invariant(format!("stratum dimension {} is not a nonnegative integer", fmt_q(&v))));
        }
        Ok(Some(v.to_integer()))
    }

    /// dim(X_x(b) ∩ I_P w𝐚), `None` when empty.
    pub fn dim_stratum(&self, x: &ExtAffWeylElt, w: &ExtAffWeylElt) -> Result<Option<i64>, Error> {
        let r = self.d.reduced_word(x);
        self.dim_stratum_word(&r.word, &r.tau, w)
    }

    fn dim_stratum_word(&self, word: &[u8], tau: &ExtAffWeylElt, w: &ExtAffWeylElt) -> Result<Option<i64>, Error> {
        let d = self.d;
        let bt = d.conjugate(w, &self.b);
        if d.length(&bt) as usize > word.len() {
            return Ok(None);
        }
        let states = d.fold_states(word, tau, &self.parabolic, w, Some(&bt));
        self.stratum_from_entry(states.get(&bt).copied())
    }

    /// Sweeps w over the ball of radius `cutoff` after the emptiness checks.
    pub fn solve(&self, x: &ExtAffWeylElt, cutoff: Option<usize>) -> Result<AdlvResult, Error> {
        let cutoff = cutoff.unwrap_or_else(|| self.default_cutoff(x));
        if let NecessaryCondition::Violated(c) = self.necessary_condition(x) {
            return Ok(AdlvResult { status: Status::EmptyCertified(c), cutoff, swept: 0 });
        }
        let r = self.d.reduced_word(x);
        let ball = self.d.ball(cutoff);
        let dims: Vec<Option<i64>> = ball
            .par_iter()
            .map(|w| self.dim_stratum_word(&r.word, &r.tau, w))
            .collect::<Result<_, _>>()?;
        let best = dims
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (v, i)))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let status = match best {
            Some((dim, i)) => Status::NonEmpty { dim, witness_w: ball[i] },
            None => Status::EmptyUpToCutoff,
        };
        Ok(AdlvResult { status, cutoff, swept: ball.len() })
    }

    /// ⋃_{ℓ(y) ≤ cutoff} supp(T_{y⁻¹} T_{b₀} T_y) for the fundamental representative b₀.
    pub fn superset(&self, cutoff: usize) -> Result<BTreeSet<ExtAffWeylElt>, Error> {
        let d = self.d;
        let (b0, _) = d.fundamental_representative(&self.class)?;
        let h = HeckeAlgebra::new(d);
        let ball = d.ball(cutoff);
        let parts: Vec<BTreeSet<ExtAffWeylElt>> =
            ball.par_iter().map(|y| h.double_coset_product_support(&[d.inverse(y), b0, *y])).collect();
        Ok(parts.into_iter().flatten().collect())
    }

    /// Combines at-infinity tables with Levi solves over w ∈ ᴹW.
    pub fn reduce_to_basic(&self, x: &ExtAffWeylElt, cutoff: usize) -> Result<ReduceResult, Error> {
        let d = self.d;
        let p = &self.parabolic;
        if !d.in_omega_m(&self.b, &p.levi) {
            return Err(Error::Precondition("b must be basic in M".into()));
        }
        let mut best: Option<i64> = None;
        let mut definite = true;
        for w in d.weyl.elements() {
            let wi = d.weyl.inv(w);
            if !p.levi.simple_m.iter().all(|&a| d.is_positive(d.weyl.act_root(wi, a))) {
                continue;
            }
            let we = ExtAffWeylElt::finite(w);
            let table = d.orbit_dim_table(x, p, &we, Orientation::AtInfinity)?;
            let m2 = d.levi(p.levi.roots.iter().map(|&a| d.weyl.act_root(wi, a)).collect());
            let ld = d.levi_datum(&m2);
            let b2 = d.conjugate(&we, &self.b);
            let b2m = ld.from_parent_elt(&b2).ok_or_else(|| Error::Invariant("w⁻¹bw not in W̃_M′".into()))?;
            let class_m = ld.datum.classify(&b2m)?;
            if !ld.datum.is_basic(&class_m) {
                return Err(Error::Invariant("w⁻¹bw is not basic in M′".into()));
            }
            let ctx = ClassContext::new(&ld.datum, &class_m);
            for (y, e) in &table.entries {
                let ym = ld.from_parent_elt(y).expect("at-infinity entries lie in W̃_M′");
                let res = ctx.solve(&ym, Some(cutoff))?;
                match res.status {
                    Status::NonEmpty { dim, .. } => {
                        let v = Q::from_integer(*e as i64 + dim) - self.correction;
                        if !v.is_integer() {
                            return Err(Error::Invariant("fractional dimension in Levi reduction".into()));
                        }
                        best = best.max(Some(v.to_integer()));
                    }
                    Status::EmptyUpToCutoff => definite = false,
                    Status::EmptyCertified(_) => {}
                }
            }
        }
        Ok(ReduceResult { dim: best, definite })
    }

    /// Shrunken-chamber rule for basic b.
    pub fn predict_shrunken(&self, x: &ExtAffWeylElt) -> Result<Prediction, Error> {
        let d = self.d;
        if !d.is_basic(&self.class) {
            return Err(Error::Precondition("class must be basic".into()));
        }
        if !d.is_shrunken(x) {
            return Err(Error::Precondition(format!("{} is not shrunken", d.fmt_elt(x))));
        }
        let v = d.eta_conj(x);
        if d.eta_g(x) != self.class.kappa || d.weyl.support(v).len() != d.ss_rank() {
            return Ok(Prediction::Empty);
        }
        let n = d.length(x) as i64 + d.weyl.len[v as usize] as i64 - d.defect(&self.class) as i64;
        Ok(Prediction::NonEmpty { dim: Q::new(n, 2) })
    }

    /// P-alcove rule for basic b.
    pub fn predict_palcove(&self, x: &ExtAffWeylElt) -> Result<PalcovePrediction, Error> {
        let d = self.d;
        if !d.is_basic(&self.class) {
            return Err(Error::Precondition("class must be basic".into()));
        }
        for p in d.semistandard_parabolics() {
            if !d.p_alcove(x, p, false) {
                continue;
            }
            let avg = d.average_levi(&RatCw::integral(x.lambda), &p.levi);
            let ok = d.eta_g(x) == self.class.kappa && avg == self.class.newton;
            if !ok {
                return Ok(PalcovePrediction::Empty { witness: p.describe(d) });
            }
        }
        Ok(PalcovePrediction::NonEmptyPredicted)
    }

    /// JSON record of a result.
    pub fn result_json(&self, x: &ExtAffWeylElt, res: &AdlvResult) -> serde_json::Value {
        let d = self.d;
        let (dim, witness) = match &res.status {
            Status::NonEmpty { dim, witness_w } => (Some(*dim), Some(d.fmt_elt(witness_w))),
            _ => (None, None),
        };
        let certs: Vec<&Certificate> = match &res.status {
            Status::EmptyCertified(c) => vec![c],
            _ => vec![],
        };
        serde_json::json!({
            "x": d.fmt_elt(x),
            "class_key": d.class_key(&self.class),
            "status": res.status_name(),
            "dim": dim,
            "witness_w": witness,
            "cutoff": res.cutoff,
            "certificates": certs,
        })
    }
}

impl RootDatum {
    /// Folding scan of a reduced word of x against ^{w⁻¹}(I_M N)-orbits.
    /// With a target, states that can no longer reach it are dropped.
    pub fn fold_states(
        &self,
        word: &[u8],
        tau: &ExtAffWeylElt,
        p: &Parabolic,
        w: &ExtAffWeylElt,
        target: Option<&ExtAffWeylElt>,
    ) -> FxHashMap<ExtAffWeylElt, u32> {
        let pre_target = target.map(|t| self.mul(t, &self.inverse(tau)));
        let mut cur: FxHashMap<ExtAffWeylElt, u32> = FxHashMap::default();
        cur.insert(ExtAffWeylElt::IDENTITY, 0);
        let bump = |m: &mut FxHashMap<ExtAffWeylElt, u32>, k: ExtAffWeylElt, v: u32| {
            let e = m.entry(k).or_insert(v);
            if *e < v {
                *e = v;
            }
        };
        for (step, &g) in word.iter().enumerate() {
            let g = g as usize;
            let remaining = (word.len() - step - 1) as u32;
            let mut next: FxHashMap<ExtAffWeylElt, u32> = FxHashMap::default();
            next.reserve(cur.len() * 2);
            for (z, dz) in cur {
                let c = self.crossing(&self.mul(w, &z), g);
                // The side of the wall whose root group lies in the orbit group.
                let center_lower = if p.levi.in_m[c.beta] { c.m >= 1 } else { p.in_n[c.beta] };
                let zs = self.mul_gen(&z, g);
                if c.z_lower == center_lower {
                    bump(&mut next, zs, dz + 1);
                } else {
                    bump(&mut next, zs, dz);
                    bump(&mut next, z, dz + 1);
                }
            }
            if let Some(t) = &pre_target {
                next.retain(|z, _| self.length(&self.mul(&self.inverse(z), t)) <= remaining);
            }
            cur = next;
        }
        if tau.is_identity() {
            cur
        } else {
            cur.into_iter().map(|(z, v)| (self.mul(&z, tau), v)).collect()
        }
    }

    /// The orbit-intersection dimension table of x for (P, w).
    pub fn orbit_dim_table(
        &self,
        x: &ExtAffWeylElt,
        p: &Parabolic,
        w: &ExtAffWeylElt,
        orientation: Orientation,
    ) -> Result<OrbitDimTable, Error> {
        let r = self.reduced_word(x);
        let states = self.fold_states(&r.word, &r.tau, p, w, None);
        let entries: BTreeMap<ExtAffWeylElt, u32> = match orientation {
            Orientation::Periodic => states.into_iter().collect(),
            Orientation::AtInfinity => {
                if w.lambda.iter().any(|&c| c != 0) {
                    return Err(Error::Precondition("at-infinity tables need a finite twist".into()));
                }
                let wi: WId = self.weyl.inv(w.w);
                if !p.levi.simple_m.iter().all(|&a| self.is_positive(self.weyl.act_root(wi, a))) {
                    return Err(Error::Precondition("twist must be a minimal coset representative in ᴹW".into()));
                }
                let m2 = self.levi(p.levi.roots.iter().map(|&a| self.weyl.act_root(wi, a)).collect());
                let mut out = BTreeMap::new();
                for (y, v) in states {
                    if !m2.contains_weyl(y.w) {
                        continue;
                    }
                    let lm = self.length_in(&y, &m2);
                    if v < lm {
                        return Err(Error::Invariant(format!("periodic entry {v} below ℓ_M′ = {lm} at {}", self.fmt_elt(&y))));
                    }
                    out.insert(y, v - lm);
                }
                out
            }
        };
        Ok(OrbitDimTable { x: *x, parabolic: p.clone(), twist: *w, orientation, entries })
    }

    /// Convenience wrapper around [`ClassContext::solve`].
    pub fn solve(&self, x: &ExtAffWeylElt, c: &SigmaConjClass, cutoff: Option<usize>) -> Result<AdlvResult, Error> {
        ClassContext::new(self, c).solve(x, cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::{DatumSpec, Family, Variant};

    #[test]
    fn identity_tables() {
        let d = RootDatum::build(DatumSpec::new(Family::C, 2, Variant::SimplyConnected)).unwrap();
        let g = d.standard_parabolic(&[0, 1]);
        let t = d.orbit_dim_table(&ExtAffWeylElt::IDENTITY, &g, &ExtAffWeylElt::IDENTITY, Orientation::Periodic).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(ExtAffWeylElt::IDENTITY, 0)]));
        for x in d.ball(4) {
            let t = d.orbit_dim_table(&x, &g, &ExtAffWeylElt::IDENTITY, Orientation::Periodic).unwrap();
            assert_eq!(t.entries, BTreeMap::from([(x, d.length(&x))]));
        }
    }

    #[test]
    fn identity_class_nonempty_at_identity() {
        let d = RootDatum::build(DatumSpec::new(Family::A, 2, Variant::SimplyConnected)).unwrap();
        let c = d.classify(&ExtAffWeylElt::IDENTITY).unwrap();
        let r = d.solve(&ExtAffWeylElt::IDENTITY, &c, None).unwrap();
        assert_eq!(r.status, Status::NonEmpty { dim: 0, witness_w: ExtAffWeylElt::IDENTITY });
    }
}
