//! σ-conjugacy classes as pairs (Newton point ν̄, κ = η_G): Newton points
//! of W̃-elements, classification, enumeration of B(G) up to a bound,
//! standard and fundamental representatives, defect, and the Grassmannian
//! non-emptiness test.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::affine_weyl::ExtAffWeylElt;
use crate::lattice::{self, HermiteBasis, Q};
use crate::root_data::{add, dot, Cw, LatticeClass, Levi, Parabolic, RatCw, RootDatum, WId, MAX_RANK};
use crate::Error;

/// A class [b] ∈ B(G).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaConjClass {
    /// Dominant Newton point ν̄.
    pub newton: RatCw,
    /// η_G(b).
    pub kappa: LatticeClass,
    /// J of the standard parabolic P with ν̄ ∈ 𝔞_P⁺.
    pub home_j: Vec<usize>,
    /// The element of Λ_M whose W_M-average is ν̄.
    pub lambda_m: LatticeClass,
}

/// JSON catalog record.
#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub key: String,
    #[serde(rename = "type")]
    pub family: String,
    pub rank: usize,
    pub variant: String,
    pub newton: Vec<String>,
    pub kappa: String,
    pub basic: bool,
    pub two_rho_nu: String,
    pub defect: usize,
    pub standard_rep: String,
    pub fundamental_rep: String,
    pub fundamental_parabolic: String,
}

impl RootDatum {
    /// Applies w to a rational coweight.
    pub fn weyl_act_rat(&self, w: WId, v: &RatCw) -> RatCw {
        RatCw::new(self.weyl.act(w, &v.num), v.den)
    }

    /// The dominant W-conjugate of ν and an element carrying ν to it.
    pub fn dominant_conjugate(&self, v: &RatCw) -> (RatCw, WId) {
        let mut v = *v;
        let mut w: WId = 0;
        'outer: loop {
            for i in 0..self.ss_rank() {
                if dot(&self.roots[self.simple[i]], &v.num) < 0 {
                    let s = self.simple_reflection(i);
                    v = self.weyl_act_rat(s, &v);
                    w = self.weyl.mul(s, w);
                    continue 'outer;
                }
            }
            return (v, w);
        }
    }

    pub fn is_dominant_rat(&self, v: &RatCw) -> bool {
        self.simple.iter().all(|&s| dot(&self.roots[s], &v.num) >= 0)
    }

    /// (1/|W_M|) Σ_{w ∈ W_M} wλ.
    pub fn average_levi(&self, l: &RatCw, m: &Levi) -> RatCw {
        let mut sum = [0i64; MAX_RANK];
        let mut n = 0;
        for w in self.weyl.elements().filter(|&w| m.contains_weyl(w)) {
            sum = add(&sum, &self.weyl.act(w, &l.num));
            n += 1;
        }
        RatCw::new(sum, n * l.den)
    }

    /// ν̄_x: dominant conjugate of the cyclic average of the translation part.
    pub fn newton_point(&self, x: &ExtAffWeylElt) -> RatCw {
        self.dominant_conjugate(&self.average_translation(x)).0
    }

    /// ⟨2ρ, ν⟩.
    pub fn two_rho_pair(&self, v: &RatCw) -> Q {
        v.pair(&self.two_rho)
    }

    fn j_of(&self, nu: &RatCw) -> Vec<usize> {
        (0..self.ss_rank()).filter(|&i| dot(&self.roots[self.simple[i]], &nu.num) == 0).collect()
    }

    /// λ_M for the class with dominant Newton point ν and κ
    /// representative μ: μ + Σ_{i ∉ J} c_i α_i∨ with W_M-average ν.
    fn solve_lambda_m(&self, nu: &RatCw, mu: &Cw, p: &Parabolic) -> Option<LatticeClass> {
        let m = &p.levi;
        let free: Vec<usize> = (0..self.ss_rank()).filter(|i| !p.j.contains(i)).collect();
        let cols: Vec<Vec<Q>> = free
            .iter()
            .map(|&i| self.average_levi(&RatCw::integral(self.coroots[self.simple[i]]), m).coords(self.dim))
            .collect();
        let target = nu.sub(&self.average_levi(&RatCw::integral(*mu), m)).coords(self.dim);
        let a: Vec<Vec<Q>> = (0..self.dim).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let c = if free.is_empty() {
            if target.iter().any(|t| !t.is_zero()) {
                return None;
            }
            vec![]
        } else {
            let c = lattice::solve_rational(&a, &target)?;
            // Reject inconsistent systems that the free-variable solve masks.
            let check: Vec<Q> = (0..self.dim).map(|r| a[r].iter().zip(&c).map(|(x, y)| x * y).sum()).collect();
            if check != target {
                return None;
            }
            lattice::to_integers(&c)?
        };
        let mut l = *mu;
        for (&i, &ci) in free.iter().zip(&c) {
            l = add(&l, &crate::root_data::scale(ci, &self.coroots[self.simple[i]]));
        }
        Some(m.quotient.class(&l))
    }

    fn make_class(&self, nu: RatCw, mu: &Cw) -> Option<SigmaConjClass> {
        let home_j = self.j_of(&nu);
        let p = self.standard_parabolic(&home_j);
        let lambda_m = self.solve_lambda_m(&nu, mu, &p)?;
        Some(SigmaConjClass { newton: nu, kappa: self.lambda_g.class(mu), home_j, lambda_m })
    }

    /// The class of x.
    pub fn classify(&self, x: &ExtAffWeylElt) -> Result<SigmaConjClass, Error> {
        let nu = self.newton_point(x);
        self.make_class(nu, &x.lambda)
            .ok_or_else(|| Error::Invariant(format!("no Λ_M element averages to the Newton point of {}", self.fmt_elt(x))))
    }

    pub fn is_basic(&self, c: &SigmaConjClass) -> bool {
        c.home_j.len() == self.ss_rank()
    }

    /// The standard parabolic P with ν̄ ∈ 𝔞_P⁺.
    pub fn home_parabolic(&self, c: &SigmaConjClass) -> Parabolic {
        self.standard_parabolic(&c.home_j)
    }

    /// Integer basis of X^*(G): characters vanishing on all coroots.
    pub fn central_characters(&self) -> Vec<Cw> {
        let rows: Vec<Vec<i64>> = self.simple.iter().map(|&s| self.coroots[s][..self.dim].to_vec()).collect();
        lattice::integer_kernel(&rows, self.dim)
            .into_iter()
            .map(|v| {
                let mut c = [0; MAX_RANK];
                c[..self.dim].copy_from_slice(&v);
                c
            })
            .collect()
    }

    /// Total order used for catalogs: (⟨2ρ, ν̄⟩, ν̄ in ambient coordinates, κ).
    pub fn class_order(&self, a: &SigmaConjClass, b: &SigmaConjClass) -> Ordering {
        (self.two_rho_pair(&a.newton), self.ambient_rational(&a.newton), self.lambda_g.invariants(&a.kappa))
            .cmp(&(self.two_rho_pair(&b.newton), self.ambient_rational(&b.newton), self.lambda_g.invariants(&b.kappa)))
    }

    /// All classes with ⟨2ρ, ν̄⟩ ≤ bound, each once. For groups with a
    /// nontrivial center the central characters of κ range over
    /// [−central_bound, central_bound].
    pub fn enumerate_classes(&self, bound: i64, central_bound: i64) -> Vec<SigmaConjClass> {
        let l = self.ss_rank();
        let chars = self.central_characters();
        // Rows: simple roots then central characters; λ is determined by its pairings.
        let sys: Vec<Vec<Q>> = self
            .simple
            .iter()
            .map(|&s| &self.roots[s])
            .chain(chars.iter())
            .map(|r| (0..self.dim).map(|k| Q::from_integer(r[k])).collect())
            .collect();
        let inv = lattice::inverse(&sys).expect("roots and central characters form a basis of X^*⊗ℚ");
        let central_vals: Vec<Vec<i64>> = cartesian(&vec![(-central_bound, central_bound); chars.len()]);
        let bq = Q::from_integer(bound);
        let mut out: Vec<SigmaConjClass> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for mask in 0..(1u32 << l) {
            let j: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
            let free: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 0).collect();
            let p = self.standard_parabolic(&j);
            let m = &p.levi;
            // ⟨α_i, avg_M λ⟩ = n_i + Σ_{j ∈ J} a_ij n_j.
            let avg_cov: Vec<Vec<Q>> = free
                .iter()
                .map(|&i| {
                    let mut acc = vec![Q::zero(); l];
                    let mut cnt = 0;
                    for w in self.weyl.elements().filter(|&w| m.contains_weyl(w)) {
                        let r = self.weyl.act_root(w, self.simple[i]);
                        for (k, &c) in self.coeffs[r].iter().enumerate() {
                            acc[k] += Q::from_integer(c);
                        }
                        cnt += 1;
                    }
                    acc.into_iter().map(|x| x / Q::from_integer(cnt)).collect()
                })
                .collect();
            for pm in 0..(1u32 << j.len()) {
                let pj: Vec<i64> = (0..j.len()).map(|k| i64::from(pm >> k & 1 == 1)).collect();
                let ranges: Vec<(i64, i64)> = free
                    .iter()
                    .enumerate()
                    .map(|(fi, _)| {
                        let d: Q = j.iter().zip(&pj).map(|(&jj, &v)| avg_cov[fi][jj] * Q::from_integer(v)).sum();
                        // 0 < n + d ≤ bound
                        let lo = (-d).floor().to_integer() + 1;
                        let hi = (bq - d).floor().to_integer();
                        (lo.min(hi + 1), hi)
                    })
                    .collect();
                for nf in cartesian(&ranges) {
                    for cv in &central_vals {
                        let mut pairs = vec![0i64; l];
                        for (k, &jj) in j.iter().enumerate() {
                            pairs[jj] = pj[k];
                        }
                        for (k, &ff) in free.iter().enumerate() {
                            pairs[ff] = nf[k];
                        }
                        let rhs: Vec<Q> = pairs.iter().chain(cv.iter()).map(|&v| Q::from_integer(v)).collect();
                        let lam: Vec<Q> = inv.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
                        let Some(lam) = lattice::to_integers(&lam) else { continue };
                        let mut mu = [0; MAX_RANK];
                        mu[..self.dim].copy_from_slice(&lam);
                        let nu = self.average_levi(&RatCw::integral(mu), m);
                        if free.iter().any(|&i| dot(&self.roots[self.simple[i]], &nu.num) <= 0) {
                            continue;
                        }
                        if self.two_rho_pair(&nu) > bq {
                            continue;
                        }
                        let lm = m.quotient.class(&mu);
                        if !seen.insert((mask, lm.clone())) {
                            continue;
                        }
                        out.push(SigmaConjClass { newton: nu, kappa: self.lambda_g.class(&mu), home_j: j.clone(), lambda_m: lm });
                    }
                }
            }
        }
        out.sort_by(|a, b| self.class_order(a, b));
        out
    }

    /// The Ω_M-element b with η_M(b) = λ_M.
    pub fn standard_representative(&self, c: &SigmaConjClass) -> ExtAffWeylElt {
        let p = self.home_parabolic(c);
        self.omega_of_class_in(&c.lambda_m, &p.levi)
    }

    /// A representative x₀ in a fundamental P′-alcove, searching conjugates of
    /// the standard representative over w ∈ W and P′ ∈ 𝒫(ʷM).
    pub fn fundamental_representative(&self, c: &SigmaConjClass) -> Result<(ExtAffWeylElt, Parabolic), Error> {
        let x = self.standard_representative(c);
        let p = self.home_parabolic(c);
        for w in self.weyl.elements() {
            let we = ExtAffWeylElt::finite(w);
            let xc = self.conjugate(&self.inverse(&we), &x);
            let mut roots: Vec<usize> = p.levi.roots.iter().map(|&a| self.weyl.act_root(w, a)).collect();
            roots.sort_unstable();
            let mut cands: Vec<&Parabolic> = self.semistandard_parabolics().iter().filter(|q| q.levi.roots == roots).collect();
            cands.sort_by_key(|q| !q.is_standard());
            if cands.is_empty() {
                continue;
            }
            let xp = self.omega_part_in(&xc, &cands[0].levi)?;
            for q in cands {
                if self.is_fundamental_p_alcove(&xp, q) {
                    if self.classify(&xp)? != *c {
                        return Err(Error::Invariant(format!("conjugate {} left the class", self.fmt_elt(&xp))));
                    }
                    return Ok((xp, q.clone()));
                }
            }
        }
        Err(Error::Invariant(format!("no fundamental representative found for {}", self.class_key(c))))
    }

    /// rank X_* minus the dimension of the fixed space of the finite part of
    /// the standard representative.
    pub fn defect(&self, c: &SigmaConjClass) -> usize {
        let x = self.standard_representative(c);
        self.defect_of_finite(x.w)
    }

    /// rank(v − 1) on X_*(A)⊗ℚ.
    pub fn defect_of_finite(&self, v: WId) -> usize {
        let m = self.weyl.matrix(v);
        let rows: Vec<Vec<i64>> =
            (0..self.dim).map(|i| (0..self.dim).map(|j| m[i][j] - i64::from(i == j)).collect()).collect();
        lattice::rank_int(&rows)
    }

    /// Mazur's criterion for X_μ(b) ≠ ∅ in the affine Grassmannian.
    pub fn grassmannian_nonempty(&self, mu: &Cw, c: &SigmaConjClass) -> Result<bool, Error> {
        if !self.is_dominant_rat(&RatCw::integral(*mu)) {
            return Err(Error::Precondition("μ must be dominant".into()));
        }
        if self.lambda_g.class(mu) != c.kappa {
            return Ok(false);
        }
        let diff = RatCw::integral(*mu).sub(&c.newton).coords(self.dim);
        let a: Vec<Vec<Q>> =
            (0..self.dim).map(|r| self.simple.iter().map(|&s| Q::from_integer(self.coroots[s][r])).collect()).collect();
        let Some(coef) = lattice::solve_rational(&a, &diff) else { return Ok(false) };
        let back: Vec<Q> = (0..self.dim).map(|r| a[r].iter().zip(&coef).map(|(x, y)| x * y).sum()).collect();
        Ok(back == diff && coef.iter().all(|x| !x.is_negative()))
    }

    /// ⟨ρ, μ⟩ − ½ def(b) for basic b.
    pub fn grassmannian_dim_basic(&self, mu: &Cw, c: &SigmaConjClass) -> Result<Q, Error> {
        if !self.is_basic(c) {
            return Err(Error::Precondition("class must be basic".into()));
        }
        Ok(Q::new(dot(&self.two_rho, mu), 2) - Q::new(self.defect(c) as i64, 2))
    }

    /// User-facing key `nu=[..];kappa=k` (ν̄ in ambient coordinates).
    pub fn class_key(&self, c: &SigmaConjClass) -> String {
        let nu: Vec<String> = self.ambient_rational(&c.newton).iter().map(lattice::fmt_q).collect();
        format!("nu=[{}];kappa={}", nu.join(","), self.lambda_g.display(&c.kappa))
    }

    /// Inverse of [`class_key`](Self::class_key).
    pub fn parse_class_key(&self, s: &str) -> Result<SigmaConjClass, Error> {
        let err = || Error::Parse(format!("bad class key '{s}'"));
        let (a, b) = s.split_once(';').ok_or_else(err)?;
        let nu_s = a.trim().strip_prefix("nu=").ok_or_else(err)?.trim().trim_start_matches('[').trim_end_matches(']');
        let k_s = b.trim().strip_prefix("kappa=").ok_or_else(err)?;
        let amb: Vec<Q> = nu_s.split(',').map(lattice::parse_q).collect::<Option<_>>().ok_or_else(err)?;
        let internal = self.ambient.solve(&amb).filter(|v| self.ambient.apply(v) == amb).ok_or_else(err)?;
        let den = internal.iter().fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
        let mut num = [0; MAX_RANK];
        for (k, q) in internal.iter().enumerate() {
            num[k] = (q * Q::from_integer(den)).to_integer();
        }
        let nu = RatCw::new(num, den);
        if !self.is_dominant_rat(&nu) {
            return Err(Error::Parse(format!("Newton point in '{s}' is not dominant")));
        }
        let kappa = self.lambda_g.parse(k_s).ok_or_else(err)?;
        let mut mu = [0; MAX_RANK];
        mu[..self.dim].copy_from_slice(&kappa.0);
        self.make_class(nu, &mu).ok_or_else(|| Error::Parse(format!("no class with key '{s}'")))
    }

    /// The basic class with κ.
    pub fn basic_class(&self, kappa: &LatticeClass) -> SigmaConjClass {
        let tau = self.omega_of_class(kappa);
        self.classify(&tau).expect("Ω elements classify")
    }

    pub fn class_record(&self, c: &SigmaConjClass) -> Result<ClassRecord, Error> {
        let spec = self.spec();
        let (f, fp) = self.fundamental_representative(c)?;
        Ok(ClassRecord {
            key: self.class_key(c),
            family: format!("{:?}", spec.family),
            rank: spec.rank,
            variant: spec.variant_name().into(),
            newton: self.ambient_rational(&c.newton).iter().map(lattice::fmt_q).collect(),
            kappa: self.lambda_g.display(&c.kappa),
            basic: self.is_basic(c),
            two_rho_nu: lattice::fmt_q(&self.two_rho_pair(&c.newton)),
            defect: self.defect(c),
            standard_rep: self.fmt_elt(&self.standard_representative(c)),
            fundamental_rep: self.fmt_elt(&f),
            fundamental_parabolic: fp.describe(self),
        })
    }

    /// Whether t lies in the ℤ-span of the given rational vectors.
    pub(crate) fn in_rational_lattice(gens: &[Vec<Q>], t: &[Q]) -> bool {
        let den = gens
            .iter()
            .flatten()
            .chain(t.iter())
            .fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
        let scale = |v: &[Q]| -> Vec<i64> { v.iter().map(|q| (q * Q::from_integer(den)).to_integer()).collect() };
        let n = t.len();
        let h = HermiteBasis::new(&gens.iter().map(|g| scale(g)).collect::<Vec<_>>(), n);
        h.contains(&scale(t))
    }
}

/// Cartesian product of inclusive integer ranges.
fn cartesian(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for v in &out {
            for k in lo..=hi {
                let mut v2 = v.clone();
                v2.push(k);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}
