//! Predicates on alcoves: P-alcoves, acute cones, the region cut out by R_N,
//! shrunken chambers, η₁/η₂, minimal Levis and fundamental P-alcoves.

use serde::Serialize;

use crate::affine_weyl::ExtAffWeylElt;
use crate::root_data::{Levi, Parabolic, RatCw, RootDatum, WId};
use crate::Error;

/// One row explaining a failed inequality k(α, x𝐚) ≥ k(α, 𝐚).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessRow {
    pub root: String,
    pub root_index: usize,
    pub k_x: i64,
    pub k_base: i64,
}

/// Verdict of a P-alcove test with its explanation.
#[derive(Clone, Debug, Serialize)]
pub struct AlcovePredicateReport {
    pub subject: String,
    pub parabolic: Option<String>,
    pub verdict: bool,
    /// Condition (1): the finite part lies in W_M.
    pub in_levi: bool,
    /// Failing rows of condition (2).
    pub witnesses: Vec<WitnessRow>,
}

/// The Levis attached to x.
#[derive(Clone, Debug)]
pub struct MinimalLevis {
    pub m_minus: Levi,
    pub m_plus: Levi,
    /// Parabolics with Levi M₊ for which x𝐚 is a P₊-alcove.
    pub p_plus: Vec<Parabolic>,
}

impl RootDatum {
    #[inline]
    fn k_ok(&self, a: usize, x: &ExtAffWeylElt, strict: bool) -> bool {
        let (k, kb) = (self.k_alpha(a, x), self.k_base(a));
        if strict { k > kb } else { k >= kb }
    }

    /// Condition (2) alone: x𝐚 ≥_α 𝐚 for all α ∈ R_N.
    pub fn in_region_p(&self, x: &ExtAffWeylElt, p: &Parabolic) -> bool {
        (0..self.nroots()).filter(|&a| p.in_n[a]).all(|a| self.k_ok(a, x, false))
    }

    /// Fast P-alcove test.
    pub fn p_alcove(&self, x: &ExtAffWeylElt, p: &Parabolic, strict: bool) -> bool {
        p.levi.contains_weyl(x.w) && (0..self.nroots()).filter(|&a| p.in_n[a]).all(|a| self.k_ok(a, x, strict))
    }

    /// P-alcove test with witnesses.
    pub fn is_p_alcove(&self, x: &ExtAffWeylElt, p: &Parabolic, strict: bool) -> AlcovePredicateReport {
        let in_levi = p.levi.contains_weyl(x.w);
        let witnesses: Vec<WitnessRow> = (0..self.nroots())
            .filter(|&a| p.in_n[a] && !self.k_ok(a, x, strict))
            .map(|a| WitnessRow { root: self.fmt_root(a), root_index: a, k_x: self.k_alpha(a, x), k_base: self.k_base(a) })
            .collect();
        AlcovePredicateReport {
            subject: self.fmt_elt(x),
            parabolic: Some(p.describe(self)),
            verdict: in_levi && witnesses.is_empty(),
            in_levi,
            witnesses,
        }
    }

    /// x𝐚 ∈ C(𝐚, w): the intersection of the w-positive half-spaces containing 𝐚.
    pub fn acute_cone_contains(&self, x: &ExtAffWeylElt, w: WId) -> bool {
        (0..self.n_pos).all(|a| {
            let b = self.weyl.act_root(w, a);
            self.k_alpha(b, x) >= self.k_base(b)
        })
    }

    /// k(α, x𝐚) ≠ k(α, 𝐚) for every root.
    pub fn is_shrunken(&self, x: &ExtAffWeylElt) -> bool {
        (0..self.nroots()).all(|a| self.k_alpha(a, x) != self.k_base(a))
    }

    /// The finite part of x.
    pub fn eta1(&self, x: &ExtAffWeylElt) -> WId {
        x.w
    }

    /// The finite chamber u with u⁻¹x𝐚 dominant. Alcoves never meet the
    /// chamber walls through the origin, so u is unique.
    pub fn eta2(&self, x: &ExtAffWeylElt) -> WId {
        self.weyl
            .elements()
            .find(|&u| self.simple.iter().all(|&s| self.k_alpha(self.weyl.act_root(u, s), x) >= 1))
            .expect("every alcove lies in some Weyl chamber")
    }

    /// η₂⁻¹η₁η₂.
    pub fn eta_conj(&self, x: &ExtAffWeylElt) -> WId {
        let u = self.eta2(x);
        self.weyl.mul(self.weyl.inv(u), self.weyl.mul(x.w, u))
    }

    /// M₋, M₊ and the parabolics P₊ by brute force over semistandard Levis.
    pub fn minimal_levis(&self, x: &ExtAffWeylElt) -> MinimalLevis {
        let levis = self.semistandard_levis();
        let m_minus = levis.iter().find(|m| m.contains_weyl(x.w)).expect("G contains x").clone();
        for m in levis.iter().filter(|m| m.contains_levi(&m_minus)) {
            let ps: Vec<Parabolic> = self
                .semistandard_parabolics()
                .iter()
                .filter(|p| p.levi == *m && self.p_alcove(x, p, false))
                .cloned()
                .collect();
            if !ps.is_empty() {
                return MinimalLevis { m_minus, m_plus: m.clone(), p_plus: ps };
            }
        }
        unreachable!("x𝐚 is always a G-alcove")
    }

    /// x ∈ Ω_M and x𝐚 is a P-alcove.
    pub fn is_fundamental_p_alcove(&self, x: &ExtAffWeylElt, p: &Parabolic) -> bool {
        self.in_omega_m(x, &p.levi) && self.p_alcove(x, p, false)
    }

    /// ν_x for x ∈ Ω_M.
    pub fn nu_x(&self, x: &ExtAffWeylElt, m: &Levi) -> Result<RatCw, Error> {
        if !self.in_omega_m(x, m) {
            return Err(Error::Precondition(format!("{} is not in Ω_M", self.fmt_elt(x))));
        }
        Ok(self.average_translation(x))
    }

    /// Semistandard parabolics P for which x𝐚 is a P-alcove.
    pub fn p_alcove_parabolics(&self, x: &ExtAffWeylElt) -> Vec<&Parabolic> {
        self.semistandard_parabolics().iter().filter(|p| self.p_alcove(x, p, false)).collect()
    }
}
