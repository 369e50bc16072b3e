//! The extended affine Weyl group W̃ = X_*(A) ⋊ W: products, alcove
//! coordinates k(α, x𝐚), length, reduced words, Bruhat order, the length-zero
//! subgroups Ω_M and η_M on W̃_M.
//!
//! Conventions: x = ε^λ w acts on the apartment by p ↦ λ + w p; the base
//! alcove 𝐚 lies in the dominant chamber with 0 in its closure, so
//! k(α, x𝐚) = ⟨α, λ⟩ + [w⁻¹α > 0].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::lattice::HermiteBasis;
use crate::root_data::{
    add, dot, neg, Cw, DatumKind, LatticeClass, Levi, Parabolic, RatCw, RootDatum, WId, MAX_RANK,
};
use crate::Error;

/// x = ε^λ w.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtAffWeylElt {
    pub lambda: Cw,
    pub w: WId,
}

impl ExtAffWeylElt {
    pub const IDENTITY: ExtAffWeylElt = ExtAffWeylElt { lambda: [0; MAX_RANK], w: 0 };

    pub fn new(lambda: Cw, w: WId) -> Self {
        ExtAffWeylElt { lambda, w }
    }

    pub fn translation(lambda: Cw) -> Self {
        ExtAffWeylElt { lambda, w: 0 }
    }

    pub fn finite(w: WId) -> Self {
        ExtAffWeylElt { lambda: [0; MAX_RANK], w }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// An affine simple reflection together with the wall of 𝐚 it reflects in:
/// the hyperplane ⟨root, ·⟩ = k0, with 𝐚 on the side `above` (> k0) or below.
#[derive(Clone, Copy, Debug)]
pub struct AffGen {
    pub elt: ExtAffWeylElt,
    /// Positive root index.
    pub root: usize,
    pub k0: i64,
    pub above: bool,
    /// Whether this is the affine node of a component.
    pub affine: bool,
}

/// x = s_{i1} ⋯ s_{ir} · τ with ℓ(τ) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedExpr {
    /// Indices into the datum's generator list.
    pub word: Vec<u8>,
    pub tau: ExtAffWeylElt,
}

/// The wall crossed when passing from z𝐚 to zs𝐚: H_{β,m} with β > 0, and
/// whether z𝐚 lies on the side ⟨β, ·⟩ < m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub beta: usize,
    pub m: i64,
    pub z_lower: bool,
}

impl Crossing {
    /// Whether z𝐚 lies on the same side as 𝐚.
    #[inline]
    pub fn z_on_base_side(&self) -> bool {
        self.z_lower == (self.m >= 1)
    }
}

/// Length-zero elements modulo central translations.
#[derive(Clone, Debug)]
pub struct OmegaGroup {
    /// Representatives, the identity first.
    pub reps: Vec<ExtAffWeylElt>,
    /// Their classes in Λ_G.
    pub classes: Vec<LatticeClass>,
    /// Integer basis of the central translations, which are also in Ω.
    pub central: Vec<Cw>,
}

/// A Levi subgroup viewed as a root datum in its own right, with its Weyl
/// group identified with W_M ⊂ W.
pub struct LeviDatum {
    pub datum: RootDatum,
    pub to_parent: Vec<WId>,
    pub from_parent: HashMap<WId, WId>,
}

impl LeviDatum {
    pub fn to_parent_elt(&self, x: &ExtAffWeylElt) -> ExtAffWeylElt {
        ExtAffWeylElt::new(x.lambda, self.to_parent[x.w as usize])
    }

    pub fn from_parent_elt(&self, x: &ExtAffWeylElt) -> Option<ExtAffWeylElt> {
        self.from_parent.get(&x.w).map(|&w| ExtAffWeylElt::new(x.lambda, w))
    }
}

/// Lazily computed tables attached to a datum.
#[derive(Default)]
pub struct DatumCache {
    pub(crate) parabolics: OnceLock<Vec<Parabolic>>,
    pub(crate) levis: OnceLock<Vec<Levi>>,
    omega: OnceLock<OmegaGroup>,
    levi_data: DashMap<Vec<usize>, Arc<LeviDatum>>,
    shells: Mutex<Vec<Arc<Vec<ExtAffWeylElt>>>>,
}

/// Builds the affine generators: the affine node of each component first,
/// then the finite simple reflections.
pub(crate) fn build_gens(d: &RootDatum) -> Vec<AffGen> {
    let mut gens = Vec::new();
    for c in &d.components {
        let th = c.highest;
        gens.push(AffGen {
            elt: ExtAffWeylElt::new(d.coroots[th], d.reflection(th)),
            root: th,
            k0: 1,
            above: false,
            affine: true,
        });
    }
    for (i, &s) in d.simple.iter().enumerate() {
        gens.push(AffGen { elt: ExtAffWeylElt::finite(d.simple_reflection(i)), root: s, k0: 0, above: true, affine: false });
    }
    gens
}

impl RootDatum {
    /// (ε^λ w)(ε^μ v) = ε^{λ + wμ} wv.
    #[inline]
    pub fn mul(&self, x: &ExtAffWeylElt, y: &ExtAffWeylElt) -> ExtAffWeylElt {
        ExtAffWeylElt { lambda: add(&x.lambda, &self.weyl.act(x.w, &y.lambda)), w: self.weyl.mul(x.w, y.w) }
    }

    /// (ε^λ w)⁻¹ = ε^{−w⁻¹λ} w⁻¹.
    #[inline]
    pub fn inverse(&self, x: &ExtAffWeylElt) -> ExtAffWeylElt {
        let wi = self.weyl.inv(x.w);
        ExtAffWeylElt { lambda: neg(&self.weyl.act(wi, &x.lambda)), w: wi }
    }

    /// y⁻¹ x y.
    pub fn conjugate(&self, y: &ExtAffWeylElt, x: &ExtAffWeylElt) -> ExtAffWeylElt {
        self.mul(&self.inverse(y), &self.mul(x, y))
    }

    pub fn product(&self, xs: &[ExtAffWeylElt]) -> ExtAffWeylElt {
        xs.iter().fold(ExtAffWeylElt::IDENTITY, |acc, x| self.mul(&acc, x))
    }

    /// k(α, x𝐚): the integer k with x𝐚 between H_{α,k−1} and H_{α,k}.
    #[inline]
    pub fn k_alpha(&self, a: usize, x: &ExtAffWeylElt) -> i64 {
        let wa = self.weyl.act_root(self.weyl.inv(x.w), a);
        dot(&self.roots[a], &x.lambda) + i64::from(self.is_positive(wa))
    }

    /// k(α, 𝐚).
    #[inline]
    pub fn k_base(&self, a: usize) -> i64 {
        i64::from(self.is_positive(a))
    }

    /// Number of affine root hyperplanes separating 𝐚 and x𝐚.
    pub fn length(&self, x: &ExtAffWeylElt) -> u32 {
        (0..self.n_pos).map(|a| (self.k_alpha(a, x) - 1).unsigned_abs() as u32).sum()
    }

    /// Iwahori-Matsumoto closed formula; must agree with [`length`](Self::length).
    pub fn length_closed_form(&self, x: &ExtAffWeylElt) -> u32 {
        let wi = self.weyl.inv(x.w);
        (0..self.n_pos)
            .map(|a| {
                let p = dot(&self.roots[a], &x.lambda);
                if self.is_positive(self.weyl.act_root(wi, a)) { p.unsigned_abs() } else { (p - 1).unsigned_abs() }
            })
            .sum::<u64>() as u32
    }

    /// The wall between z𝐚 and z·s_g 𝐚.
    #[inline]
    pub fn crossing(&self, z: &ExtAffWeylElt, g: usize) -> Crossing {
        let gen = &self.gens[g];
        let b = self.weyl.act_root(z.w, gen.root);
        let k = dot(&self.roots[b], &z.lambda) + gen.k0;
        if self.is_positive(b) {
            Crossing { beta: b, m: k, z_lower: !gen.above }
        } else {
            Crossing { beta: self.neg_root(b), m: -k, z_lower: gen.above }
        }
    }

    /// ℓ(z s_g) = ℓ(z) + 1.
    #[inline]
    pub fn is_right_ascent(&self, z: &ExtAffWeylElt, g: usize) -> bool {
        self.crossing(z, g).z_on_base_side()
    }

    /// ℓ(s_g x) = ℓ(x) − 1.
    #[inline]
    pub fn is_left_descent(&self, x: &ExtAffWeylElt, g: usize) -> bool {
        let gen = &self.gens[g];
        let k = self.k_alpha(gen.root, x);
        if gen.above { k <= gen.k0 } else { k > gen.k0 }
    }

    #[inline]
    pub fn mul_gen(&self, z: &ExtAffWeylElt, g: usize) -> ExtAffWeylElt {
        self.mul(z, &self.gens[g].elt)
    }

    #[inline]
    pub fn gen_mul(&self, g: usize, z: &ExtAffWeylElt) -> ExtAffWeylElt {
        self.mul(&self.gens[g].elt, z)
    }

    /// Reduced expression by repeatedly peeling the first left descent.
    pub fn reduced_word(&self, x: &ExtAffWeylElt) -> ReducedExpr {
        let mut word = Vec::new();
        let mut cur = *x;
        'outer: loop {
            for g in 0..self.gens.len() {
                if self.is_left_descent(&cur, g) {
                    word.push(g as u8);
                    cur = self.gen_mul(g, &cur);
                    continue 'outer;
                }
            }
            break;
        }
        ReducedExpr { word, tau: cur }
    }

    pub fn eval_word(&self, word: &[u8], tau: &ExtAffWeylElt) -> ExtAffWeylElt {
        let mut x = ExtAffWeylElt::IDENTITY;
        for &g in word {
            x = self.mul_gen(&x, g as usize);
        }
        self.mul(&x, tau)
    }

    /// The Ω-part τ with x ∈ W_a τ.
    pub fn omega_part(&self, x: &ExtAffWeylElt) -> ExtAffWeylElt {
        self.reduced_word(x).tau
    }

    pub fn is_length_zero(&self, x: &ExtAffWeylElt) -> bool {
        (0..self.n_pos).all(|a| self.k_alpha(a, x) == 1)
    }

    /// Bruhat order on W̃: equal Ω-parts and comparison in W_a, decided by the
    /// lifting property along right descents of y.
    pub fn bruhat_leq(&self, x: &ExtAffWeylElt, y: &ExtAffWeylElt) -> bool {
        let (mut x, mut y) = (*x, *y);
        let (mut lx, mut ly) = (self.length(&x), self.length(&y));
        loop {
            if lx > ly {
                return false;
            }
            if ly == 0 {
                return x == y;
            }
            let g = (0..self.gens.len()).find(|&g| !self.is_right_ascent(&y, g)).expect("positive length has a descent");
            if !self.is_right_ascent(&x, g) {
                x = self.mul_gen(&x, g);
                lx -= 1;
            }
            y = self.mul_gen(&y, g);
            ly -= 1;
        }
    }

    /// η_G(x): the class of λ in Λ_G.
    pub fn eta_g(&self, x: &ExtAffWeylElt) -> LatticeClass {
        self.lambda_g.class(&x.lambda)
    }

    /// η_M on W̃_M.
    pub fn eta_group(&self, x: &ExtAffWeylElt, m: &Levi) -> Result<LatticeClass, Error> {
        if !m.contains_weyl(x.w) {
            return Err(Error::Precondition(format!("{} is not in W̃_M", self.fmt_elt(x))));
        }
        Ok(m.quotient.class(&x.lambda))
    }

    /// Ω_G modulo central translations.
    pub fn omega_group(&self) -> &OmegaGroup {
        self.cache.omega.get_or_init(|| {
            let mut gens: Vec<Vec<i64>> = self.simple.iter().map(|&s| self.coroots[s][..self.dim].to_vec()).collect();
            gens.extend(self.central.iter().map(|c| c[..self.dim].to_vec()));
            let h = HermiteBasis::new(&gens, self.dim);
            let reps_l = h.coset_reps().expect("coroots and center span X_* rationally");
            let mut reps = Vec::new();
            let mut classes = Vec::new();
            for l in reps_l {
                let mut c = [0; MAX_RANK];
                c[..self.dim].copy_from_slice(&l);
                reps.push(self.omega_part(&ExtAffWeylElt::translation(c)));
                classes.push(self.lambda_g.class(&c));
            }
            OmegaGroup { reps, classes, central: self.central.clone() }
        })
    }

    /// The unique τ ∈ Ω_G with η_G(τ) = c.
    pub fn omega_of_class(&self, c: &LatticeClass) -> ExtAffWeylElt {
        let mut l = [0; MAX_RANK];
        l[..self.dim].copy_from_slice(&c.0);
        self.omega_part(&ExtAffWeylElt::translation(l))
    }

    /// The Levi M as a datum of its own (cached).
    pub fn levi_datum(&self, m: &Levi) -> Arc<LeviDatum> {
        if let Some(ld) = self.cache.levi_data.get(&m.roots) {
            return ld.clone();
        }
        let parent = self.spec();
        let kind = DatumKind::Levi { parent, roots: m.roots.clone() };
        let label = format!("Levi{{{}}} of {}", m.simple_m.iter().map(|&a| self.fmt_root(a)).collect::<Vec<_>>().join(","), self.label);
        let datum = RootDatum::from_simple_system(
            kind,
            label,
            self.dim,
            m.simple_m.iter().map(|&a| self.roots[a]).collect(),
            m.simple_m.iter().map(|&a| self.coroots[a]).collect(),
            self.ambient.clone(),
        );
        let to_parent: Vec<WId> =
            datum.weyl.elements().map(|w| self.weyl.lookup(datum.weyl.matrix(w)).expect("W_M ⊂ W")).collect();
        let from_parent = to_parent.iter().enumerate().map(|(i, &p)| (p, i as WId)).collect();
        let ld = Arc::new(LeviDatum { datum, to_parent, from_parent });
        self.cache.levi_data.entry(m.roots.clone()).or_insert(ld).clone()
    }

    /// Ω_M (modulo central translations of M) as elements of W̃.
    pub fn omega_elements(&self, m: &Levi) -> OmegaGroup {
        let ld = self.levi_datum(m);
        let o = ld.datum.omega_group();
        OmegaGroup {
            reps: o.reps.iter().map(|x| ld.to_parent_elt(x)).collect(),
            classes: o.classes.clone(),
            central: o.central.clone(),
        }
    }

    /// The Ω_M-part of x ∈ W̃_M.
    pub fn omega_part_in(&self, x: &ExtAffWeylElt, m: &Levi) -> Result<ExtAffWeylElt, Error> {
        let ld = self.levi_datum(m);
        let xm = ld.from_parent_elt(x).ok_or_else(|| Error::Precondition(format!("{} is not in W̃_M", self.fmt_elt(x))))?;
        Ok(ld.to_parent_elt(&ld.datum.omega_part(&xm)))
    }

    /// The element of Ω_M with η_M = c.
    pub fn omega_of_class_in(&self, c: &LatticeClass, m: &Levi) -> ExtAffWeylElt {
        let ld = self.levi_datum(m);
        ld.to_parent_elt(&ld.datum.omega_of_class(c))
    }

    /// ℓ_M(x) for x ∈ W̃_M: hyperplanes of R_M separating 𝐚 and x𝐚.
    pub fn length_in(&self, x: &ExtAffWeylElt, m: &Levi) -> u32 {
        m.roots.iter().filter(|&&a| self.is_positive(a)).map(|&a| (self.k_alpha(a, x) - 1).unsigned_abs() as u32).sum()
    }

    /// x ∈ Ω_M.
    pub fn in_omega_m(&self, x: &ExtAffWeylElt, m: &Levi) -> bool {
        m.contains_weyl(x.w) && self.length_in(x, m) == 0
    }

    /// Elements of W_a of length exactly r, in lex order of their lex-minimal words.
    pub fn wa_shell(&self, r: usize) -> Arc<Vec<ExtAffWeylElt>> {
        let mut shells = self.cache.shells.lock().expect("shell cache poisoned");
        if shells.is_empty() {
            shells.push(Arc::new(vec![ExtAffWeylElt::IDENTITY]));
        }
        while shells.len() <= r {
            let prev = shells.last().unwrap().clone();
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for u in prev.iter() {
                for g in 0..self.gens.len() {
                    if self.is_right_ascent(u, g) {
                        let v = self.mul_gen(u, g);
                        if seen.insert(v) {
                            next.push(v);
                        }
                    }
                }
            }
            shells.push(Arc::new(next));
        }
        shells[r].clone()
    }

    /// All u·τ with u ∈ W_a, ℓ(u) ≤ r and τ ranging over Ω representatives
    /// modulo central translations; ordered by (length, τ, word).
    pub fn ball(&self, r: usize) -> Vec<ExtAffWeylElt> {
        let omega = self.omega_group().reps.clone();
        let mut out = Vec::new();
        for k in 0..=r {
            let shell = self.wa_shell(k);
            for t in &omega {
                out.extend(shell.iter().map(|u| self.mul(u, t)));
            }
        }
        out
    }

    /// Elements of the ball in the Ω-component of τ.
    pub fn ball_in_component(&self, r: usize, tau: &ExtAffWeylElt) -> Vec<ExtAffWeylElt> {
        (0..=r).flat_map(|k| self.wa_shell(k).iter().map(|u| self.mul(u, tau)).collect::<Vec<_>>()).collect()
    }

    /// Average (1/N) Σ wⁱλ over the cyclic group generated by the finite part.
    pub fn average_translation(&self, x: &ExtAffWeylElt) -> RatCw {
        let mut sum = [0i64; MAX_RANK];
        let mut p = 0 as WId;
        let mut n = 0;
        loop {
            sum = add(&sum, &self.weyl.act(p, &x.lambda));
            n += 1;
            p = self.weyl.mul(x.w, p);
            if p == 0 {
                break;
            }
        }
        RatCw::new(sum, n)
    }

    /// Canonical text form `t[λ]·w`.
    pub fn fmt_elt(&self, x: &ExtAffWeylElt) -> String {
        format!("t[{}]·{}", self.fmt_coweight(&x.lambda), crate::root_data::fmt_weyl_word(self, x.w))
    }

    /// Affine word form `s0s1s2·τ^k`.
    pub fn fmt_reduced(&self, r: &ReducedExpr) -> String {
        let mut s: String = if r.word.is_empty() {
            "e".into()
        } else if self.gens.len() <= 10 {
            std::iter::once("s".to_string()).chain(r.word.iter().map(|g| g.to_string())).collect()
        } else {
            r.word.iter().map(|g| format!("s{g}")).collect::<Vec<_>>().join(" ")
        };
        if !r.tau.is_identity() {
            s.push('·');
            s.push_str(&self.fmt_elt(&r.tau));
        }
        s
    }

    /// Parses `t[λ]·w`, `e`, affine words such as `s0 s1 s2`, `s0s1s2`,
    /// `s01210`, optionally followed by `τ^k`, `τ_i^k` or a `t[λ]·w` factor.
    pub fn parse_elt(&self, s: &str) -> Result<ExtAffWeylElt, Error> {
        let err = |m: &str| Error::Parse(format!("{m} in '{s}'"));
        let mut rest = s.trim();
        let mut x = ExtAffWeylElt::IDENTITY;
        let seps = ['·', '.', '*', ' '];
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| seps.contains(&c));
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix("t[") {
                let end = r.find(']').ok_or_else(|| err("unclosed t["))?;
                let coords: Vec<i64> = if r[..end].trim().is_empty() {
                    vec![]
                } else {
                    r[..end].split(',').map(|t| t.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| err("bad coordinate"))?
                };
                let l = self.from_display_coords(&coords)?;
                x = self.mul(&x, &ExtAffWeylElt::translation(l));
                rest = &r[end + 1..];
            } else if let Some(r) = rest.strip_prefix('e').filter(|r| r.is_empty() || r.starts_with(|c: char| seps.contains(&c))) {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('s') {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                if end == 0 {
                    return Err(err("s without index"));
                }
                let digits = &r[..end];
                // A multi-digit run is a digit-per-generator word unless the datum
                // has at least 10 generators.
                let idx: Vec<usize> = if self.gens.len() > 10 {
                    vec![digits.parse().map_err(|_| err("bad index"))?]
                } else {
                    digits.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
                };
                for g in idx {
                    if g >= self.gens.len() {
                        return Err(err(&format!("generator s{g} out of range")));
                    }
                    x = self.mul_gen(&x, g);
                }
                rest = &r[end..];
            } else if let Some(r) = rest.strip_prefix('τ').or_else(|| rest.strip_prefix("tau")) {
                let (i, r) = match r.strip_prefix('_') {
                    Some(r2) => {
                        let end = r2.find(|c: char| !c.is_ascii_digit()).unwrap_or(r2.len());
                        (r2[..end].parse::<usize>().map_err(|_| err("bad τ index"))?, &r2[end..])
                    }
                    None => (1, r),
                };
                let (k, r) = match r.strip_prefix('^') {
                    Some(r2) => {
                        let end = r2
                            .char_indices()
                            .find(|&(j, c)| !(c.is_ascii_digit() || (j == 0 && c == '-')))
                            .map_or(r2.len(), |(j, _)| j);
                        (r2[..end].parse::<i64>().map_err(|_| err("bad τ exponent"))?, &r2[end..])
                    }
                    None => (1, r),
                };
                let inv = &self.lambda_g.invariant;
                if i == 0 || i > inv.len() {
                    return Err(err("τ index out of range for Λ_G"));
                }
                let mut l = [0; MAX_RANK];
                l[inv[i - 1]] = k;
                x = self.mul(&x, &self.omega_of_class(&self.lambda_g.class(&l)));
                rest = r;
            } else {
                return Err(err("unexpected token"));
            }
        }
        Ok(x)
    }
}

impl fmt::Display for ReducedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.word)
    }
}
