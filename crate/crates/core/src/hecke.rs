//! The Iwahori-Hecke algebra of W̃ over ℤ[q]: standard basis products,
//! structure constants C(x, y, z) and their q-degrees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::affine_weyl::ExtAffWeylElt;
use crate::root_data::RootDatum;

/// Dense integer polynomial in q, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<i64>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        (!self.0.is_empty()).then(|| self.0.len() as u32 - 1)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    fn add_shifted(&mut self, other: &Poly, shift: usize, sign: i64) {
        if self.0.len() < other.0.len() + shift {
            self.0.resize(other.0.len() + shift, 0);
        }
        for (i, c) in other.0.iter().enumerate() {
            self.0[i + shift] += sign * c;
        }
        self.trim();
    }

    pub fn add(&mut self, other: &Poly) {
        self.add_shifted(other, 0, 1);
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut v = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = Poly(v);
        p.trim();
        p
    }

    /// Value at q.
    pub fn eval(&self, q: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, c| acc * q + c)
    }

    /// Coefficients in powers of (q − 1).
    pub fn in_q_minus_one(&self) -> Vec<i64> {
        // Taylor expansion at q = 1 by repeated synthetic division.
        let mut c = self.0.clone();
        let mut out = Vec::with_capacity(c.len());
        while !c.is_empty() {
            let mut rem = 0;
            let mut quot = vec![0; c.len().saturating_sub(1)];
            for i in (0..c.len()).rev() {
                rem += c[i];
                if i > 0 {
                    quot[i - 1] = rem;
                }
            }
            out.push(rem);
            c = quot;
            while c.last() == Some(&0) {
                c.pop();
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c > 0 { "+" } else { "-" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "q")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Σ poly(q)·T[x].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElt {
    pub terms: BTreeMap<ExtAffWeylElt, Poly>,
}

impl HeckeElt {
    pub fn basis(x: ExtAffWeylElt) -> Self {
        HeckeElt { terms: BTreeMap::from([(x, Poly::one())]) }
    }

    pub fn coeff(&self, x: &ExtAffWeylElt) -> Poly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> BTreeSet<ExtAffWeylElt> {
        self.terms.keys().copied().collect()
    }

    fn add_term(&mut self, x: ExtAffWeylElt, p: &Poly, shift: usize, sign: i64) {
        let e = self.terms.entry(x).or_default();
        e.add_shifted(p, shift, sign);
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&mut self, other: &HeckeElt) {
        for (x, p) in &other.terms {
            self.add_term(*x, p, 0, 1);
        }
    }

    pub fn scale(&self, p: &Poly) -> HeckeElt {
        let mut out = HeckeElt::default();
        for (x, c) in &self.terms {
            let m = c.mul(p);
            if !m.is_zero() {
                out.terms.insert(*x, m);
            }
        }
        out
    }

    pub fn display(&self, d: &RootDatum) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(x, p)| format!("({p})·T[{}]", d.fmt_elt(x))).collect::<Vec<_>>().join(" + ")
    }
}

/// Multiplication in the Hecke algebra of one datum, with an optional memo of
/// prefix products T_x·T_{s_{i1}⋯s_{ik}}.
pub struct HeckeAlgebra<'a> {
    pub d: &'a RootDatum,
    memo: Option<DashMap<(ExtAffWeylElt, ExtAffWeylElt), Arc<HeckeElt>>>,
}

impl<'a> HeckeAlgebra<'a> {
    pub fn new(d: &'a RootDatum) -> Self {
        HeckeAlgebra { d, memo: None }
    }

    pub fn with_memo(d: &'a RootDatum) -> Self {
        HeckeAlgebra { d, memo: Some(DashMap::new()) }
    }

    /// h · T_s for the affine generator g.
    pub fn right_mul_gen(&self, h: &HeckeElt, g: usize) -> HeckeElt {
        let mut out = HeckeElt::default();
        for (z, p) in &h.terms {
            let zs = self.d.mul_gen(z, g);
            if self.d.is_right_ascent(z, g) {
                out.add_term(zs, p, 0, 1);
            } else {
                // T_z T_s = (q − 1) T_z + q T_{zs}
                out.add_term(*z, p, 1, 1);
                out.add_term(*z, p, 0, -1);
                out.add_term(zs, p, 1, 1);
            }
        }
        out
    }

    /// h · T_τ for ℓ(τ) = 0.
    pub fn right_mul_omega(&self, h: &HeckeElt, tau: &ExtAffWeylElt) -> HeckeElt {
        if tau.is_identity() {
            return h.clone();
        }
        HeckeElt { terms: h.terms.iter().map(|(z, p)| (self.d.mul(z, tau), p.clone())).collect() }
    }

    /// T_x · T_y.
    pub fn mul_basis(&self, x: &ExtAffWeylElt, y: &ExtAffWeylElt) -> HeckeElt {
        let r = self.d.reduced_word(y);
        let mut prefixes = Vec::with_capacity(r.word.len() + 1);
        let mut p = ExtAffWeylElt::IDENTITY;
        prefixes.push(p);
        for &g in &r.word {
            p = self.d.mul_gen(&p, g as usize);
            prefixes.push(p);
        }
        let (mut start, mut h) = (0, HeckeElt::basis(*x));
        if let Some(memo) = &self.memo {
            for k in (1..prefixes.len()).rev() {
                if let Some(v) = memo.get(&(*x, prefixes[k])) {
                    start = k;
                    h = (**v).clone();
                    break;
                }
            }
        }
        for k in start..r.word.len() {
            h = self.right_mul_gen(&h, r.word[k] as usize);
            if let Some(memo) = &self.memo {
                memo.entry((*x, prefixes[k + 1])).or_insert_with(|| Arc::new(h.clone()));
            }
        }
        self.right_mul_omega(&h, &r.tau)
    }

    /// h₁ · h₂.
    pub fn mul(&self, h1: &HeckeElt, h2: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::default();
        for (x, p) in &h1.terms {
            for (y, r) in &h2.terms {
                out.add(&self.mul_basis(x, y).scale(&p.mul(r)));
            }
        }
        out
    }

    /// C(x, y, z): the coefficient of T_z in T_x T_y.
    pub fn structure_constant(&self, x: &ExtAffWeylElt, y: &ExtAffWeylElt, z: &ExtAffWeylElt) -> Poly {
        self.mul_basis(x, y).coeff(z)
    }

    /// deg_q C(x, y, z), `None` when C = 0.
    pub fn structure_deg(&self, x: &ExtAffWeylElt, y: &ExtAffWeylElt, z: &ExtAffWeylElt) -> Option<u32> {
        self.structure_constant(x, y, z).degree()
    }

    /// Support of T_{x₁} ⋯ T_{x_r}.
    pub fn double_coset_product_support(&self, xs: &[ExtAffWeylElt]) -> BTreeSet<ExtAffWeylElt> {
        let mut h = HeckeElt::basis(ExtAffWeylElt::IDENTITY);
        for x in xs {
            let mut next = HeckeElt::default();
            for (z, p) in &h.terms {
                next.add(&self.mul_basis(z, x).scale(p));
            }
            h = next;
        }
        h.support()
    }
}
