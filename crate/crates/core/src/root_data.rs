//! Root data of split reductive groups: roots, coroots, the finite Weyl group
//! as integer matrices on X_*(A), the lattice quotients Λ_G and Λ_M, and
//! semistandard parabolic subgroups described by (u, J).

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_weyl::AffGen;
use crate::lattice::{self, HermiteBasis, Q};
use crate::Error;

/// Largest supported dimension of X_*(A).
pub const MAX_RANK: usize = 6;

/// A coweight (or a covector) in the fixed basis of X_*(A); entries past the
/// datum's `dim` are zero.
pub type Cw = [i64; MAX_RANK];

/// Index of a finite Weyl group element.
pub type WId = u16;

type Mat = [[i64; MAX_RANK]; MAX_RANK];

/// Pairing of a covector with a coweight.
#[inline]
pub fn dot(a: &Cw, b: &Cw) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn add(a: &Cw, b: &Cw) -> Cw {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn sub(a: &Cw, b: &Cw) -> Cw {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn neg(a: &Cw) -> Cw {
    std::array::from_fn(|i| -a[i])
}

#[inline]
pub fn scale(k: i64, a: &Cw) -> Cw {
    std::array::from_fn(|i| k * a[i])
}

fn cw_from(v: &[i64]) -> Cw {
    let mut c = [0; MAX_RANK];
    c[..v.len()].copy_from_slice(v);
    c
}

/// Cartan family of a supported datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
    /// GL_n, with `rank` = n.
    GL,
}

/// Choice of cocharacter lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Variant {
    /// X_*(A) = Q∨.
    SimplyConnected,
    /// X_*(A) = P∨.
    Adjoint,
    /// X_*(A) = ℤ^n for GL_n.
    GL,
}

/// Constructor input for [`RootDatum::build`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DatumSpec {
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
    pub variant: Variant,
}

impl DatumSpec {
    pub fn new(family: Family, rank: usize, variant: Variant) -> Self {
        DatumSpec { family, rank, variant }
    }

    /// Parses CLI-style names such as `("C", 2, "sc")` or `("GL", 3, "GL")`.
    pub fn parse(family: &str, rank: usize, variant: &str) -> Result<Self, Error> {
        let family = match family.to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "G" | "G2" => Family::G,
            "GL" => Family::GL,
            other => return Err(Error::Unsupported(format!("type {other}"))),
        };
        let variant = match variant.to_ascii_lowercase().as_str() {
            "sc" | "simply-connected" | "simply_connected" | "sl" | "sp" | "spin" => Variant::SimplyConnected,
            "ad" | "adjoint" | "pgl" | "psp" | "so" => Variant::Adjoint,
            "gl" => Variant::GL,
            other => return Err(Error::Unsupported(format!("variant {other}"))),
        };
        Ok(DatumSpec { family, rank, variant })
    }

    pub fn variant_name(&self) -> &'static str {
        match self.variant {
            Variant::SimplyConnected => "sc",
            Variant::Adjoint => "adjoint",
            Variant::GL => "GL",
        }
    }
}

impl fmt::Display for DatumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::GL => write!(f, "GL{}", self.rank),
            fam => write!(f, "{:?}{} ({})", fam, self.rank, self.variant_name()),
        }
    }
}

/// Where a datum comes from: a supported top-level group or a Levi of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DatumKind {
    Top(DatumSpec),
    Levi { parent: DatumSpec, roots: Vec<usize> },
}

/// Embedding of X_*(A)⊗ℚ into a Bourbaki ambient space, used for display.
#[derive(Clone, Debug)]
pub struct Ambient {
    /// m × dim matrix; column j is the image of the j-th basis coweight.
    pub e: Vec<Vec<Q>>,
    /// Whether X_*(A) lands in ℤ^m, so elements print in ambient coordinates.
    pub integral: bool,
}

impl Ambient {
    pub fn m(&self) -> usize {
        self.e.len()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.e.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn solve(&self, v: &[Q]) -> Option<Vec<Q>> {
        lattice::solve_rational(&self.e, v)
    }
}

/// Class of a coweight in a quotient X_*(A)/L, stored as the canonical Hermite
/// representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeClass(pub Vec<i64>);

/// The quotient X_*(A)/L for L spanned by a set of coroots.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub basis: HermiteBasis,
    pub invariant: Vec<usize>,
}

impl LatticeQuotient {
    pub fn new(gens: &[Cw], dim: usize) -> Self {
        let g: Vec<Vec<i64>> = gens.iter().map(|c| c[..dim].to_vec()).collect();
        let basis = HermiteBasis::new(&g, dim);
        let invariant = basis.invariant_positions();
        LatticeQuotient { basis, invariant }
    }

    /// Normal form of λ; idempotent and additive on representatives.
    pub fn class(&self, lambda: &Cw) -> LatticeClass {
        LatticeClass(self.basis.reduce(&lambda[..self.basis.n]))
    }

    /// The coordinates that carry information (empty for the trivial group).
    pub fn invariants(&self, c: &LatticeClass) -> Vec<i64> {
        self.invariant.iter().map(|&i| c.0[i]).collect()
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<i64> {
        self.basis.index()
    }

    /// Short user-facing form: `0`, `k` or `(a,b)`.
    pub fn display(&self, c: &LatticeClass) -> String {
        let v = self.invariants(c);
        match v.len() {
            0 => "0".into(),
            1 => v[0].to_string(),
            _ => format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    /// Inverse of [`display`](Self::display) on canonical strings.
    pub fn parse(&self, s: &str) -> Option<LatticeClass> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let vals: Vec<i64> = if s.is_empty() || (self.invariant.is_empty() && s == "0") {
            vec![]
        } else {
            s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?
        };
        if vals.len() != self.invariant.len() {
            return None;
        }
        let mut v = vec![0; self.basis.n];
        for (&i, x) in self.invariant.iter().zip(vals) {
            v[i] = x;
        }
        let c = LatticeClass(self.basis.reduce(&v));
        (c.0 == v).then_some(c)
    }
}

/// The finite Weyl group, enumerated by (length, lex-minimal reduced word).
#[derive(Clone, Debug)]
pub struct WeylGroup {
    mats: Vec<Mat>,
    /// Lex-minimal reduced word in 0-based simple-root positions.
    pub words: Vec<Vec<u8>>,
    pub len: Vec<u32>,
    mult: Vec<WId>,
    inv: Vec<WId>,
    /// `root_perm[w * nroots + a]` = index of w·α_a.
    root_perm: Vec<u16>,
    nroots: usize,
    index: HashMap<Mat, WId>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.mats.len()
    }

    #[inline]
    pub fn mul(&self, a: WId, b: WId) -> WId {
        self.mult[a as usize * self.mats.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: WId) -> WId {
        self.inv[a as usize]
    }

    /// Index of w·α.
    #[inline]
    pub fn act_root(&self, w: WId, a: usize) -> usize {
        self.root_perm[w as usize * self.nroots + a] as usize
    }

    /// w·λ on coweights.
    #[inline]
    pub fn act(&self, w: WId, l: &Cw) -> Cw {
        let m = &self.mats[w as usize];
        std::array::from_fn(|i| m[i].iter().zip(l).map(|(a, b)| a * b).sum())
    }

    pub fn matrix(&self, w: WId) -> &Mat {
        &self.mats[w as usize]
    }

    pub fn lookup(&self, m: &Mat) -> Option<WId> {
        self.index.get(m).copied()
    }

    /// Set of simple reflections (0-based positions) occurring in a reduced word.
    pub fn support(&self, w: WId) -> Vec<u8> {
        let mut s: Vec<u8> = self.words[w as usize].clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Elements ordered as enumerated.
    pub fn elements(&self) -> impl Iterator<Item = WId> {
        0..self.mats.len() as WId
    }
}

/// An irreducible component of the root system.
#[derive(Clone, Debug)]
pub struct Component {
    /// 0-based positions into `simple`.
    pub simple: Vec<usize>,
    /// Index of the highest root.
    pub highest: usize,
    /// Marks: coefficients of the highest root on this component's simple roots.
    pub marks: Vec<i64>,
    pub coxeter_number: usize,
}

/// Root datum: the immutable context for all computations.
pub struct RootDatum {
    pub kind: DatumKind,
    pub label: String,
    /// Rank of X_*(A).
    pub dim: usize,
    /// Roots as covectors: the first `n_pos` are positive, and
    /// `roots[i + n_pos] = -roots[i]`.
    pub roots: Vec<Cw>,
    pub coroots: Vec<Cw>,
    /// Coefficients of each root on the simple roots.
    pub coeffs: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    pub n_pos: usize,
    /// Indices (into `roots`) of the simple roots.
    pub simple: Vec<usize>,
    pub two_rho: Cw,
    pub weyl: WeylGroup,
    pub components: Vec<Component>,
    pub ambient: Ambient,
    pub lambda_g: LatticeQuotient,
    /// Exact barycenter of the base alcove.
    pub barycenter: Vec<Q>,
    /// Integer basis of the central cocharacters {z : ⟨α, z⟩ = 0 ∀α}.
    pub central: Vec<Cw>,
    /// Affine simple reflections; see [`crate::affine_weyl`].
    pub gens: Vec<AffGen>,
    pub(crate) root_index: HashMap<Cw, usize>,
    reflections: Vec<WId>,
    pub(crate) cache: crate::affine_weyl::DatumCache,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({})", self.label)
    }
}

/// Bourbaki simple roots in the ambient space, plus the ambient dimension.
fn bourbaki(family: Family, l: usize) -> (usize, Vec<Vec<Q>>) {
    let z = Q::zero;
    let e = |m: usize, i: usize| -> Vec<Q> { (0..m).map(|k| if k == i { Q::one() } else { z() }).collect() };
    let minus = |a: Vec<Q>, b: Vec<Q>| -> Vec<Q> { a.iter().zip(&b).map(|(x, y)| x - y).collect() };
    match family {
        Family::A | Family::GL => {
            let m = l + 1;
            (m, (0..l).map(|i| minus(e(m, i), e(m, i + 1))).collect())
        }
        Family::B | Family::C | Family::D => {
            let m = l;
            let mut s: Vec<Vec<Q>> = (0..l - 1).map(|i| minus(e(m, i), e(m, i + 1))).collect();
            let last = match family {
                Family::B => e(m, l - 1),
                Family::C => e(m, l - 1).into_iter().map(|x| x * Q::from_integer(2)).collect(),
                _ => e(m, l - 2).iter().zip(e(m, l - 1)).map(|(a, b)| a + b).collect(),
            };
            s.push(last);
            (m, s)
        }
        Family::G => {
            let q = Q::from_integer;
            (3, vec![vec![q(1), q(-1), q(0)], vec![q(-2), q(1), q(1)]])
        }
    }
}

fn mat_identity() -> Mat {
    let mut m = [[0; MAX_RANK]; MAX_RANK];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; MAX_RANK]; MAX_RANK];
    for i in 0..MAX_RANK {
        for k in 0..MAX_RANK {
            if a[i][k] != 0 {
                for j in 0..MAX_RANK {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

/// Reflection matrix λ ↦ λ − ⟨α, λ⟩α∨ on the first `dim` coordinates.
fn reflection_matrix(root: &Cw, coroot: &Cw, dim: usize) -> Mat {
    let mut m = mat_identity();
    for i in 0..dim {
        for k in 0..dim {
            m[i][k] -= coroot[i] * root[k];
        }
    }
    m
}

impl RootDatum {
    /// Builds a supported datum.
    pub fn build(spec: DatumSpec) -> Result<RootDatum, Error> {
        let l = match spec.family {
            Family::GL => spec.rank.checked_sub(1).ok_or_else(|| Error::Unsupported("GL0".into()))?,
            _ => spec.rank,
        };
        let ok = match spec.family {
            Family::A => (1..=4).contains(&l) && spec.variant != Variant::GL,
            Family::B => (2..=3).contains(&l) && spec.variant != Variant::GL,
            Family::C => (2..=3).contains(&l) && spec.variant != Variant::GL,
            Family::D => l == 4 && spec.variant != Variant::GL,
            Family::G => l == 2 && spec.variant != Variant::GL,
            Family::GL => (2..=5).contains(&spec.rank) && spec.variant == Variant::GL,
        };
        if !ok {
            return Err(Error::Unsupported(format!("{spec}")));
        }
        let (m, simple_amb) = bourbaki(spec.family, l);
        // Ambient coroots α∨ = 2α/(α,α).
        let coroot_amb: Vec<Vec<Q>> = simple_amb
            .iter()
            .map(|a| {
                let n: Q = a.iter().map(|x| x * x).sum();
                a.iter().map(|x| x * Q::from_integer(2) / n).collect()
            })
            .collect();
        // pm[i][k] = ⟨α_i, α_k∨⟩
        let pm: Vec<Vec<i64>> = simple_amb
            .iter()
            .map(|a| coroot_amb.iter().map(|c| a.iter().zip(c).map(|(x, y)| x * y).sum::<Q>().to_integer()).collect())
            .collect();
        let (dim, roots, coroots, e): (usize, Vec<Cw>, Vec<Cw>, Vec<Vec<Q>>) = match spec.variant {
            Variant::SimplyConnected => {
                let roots = (0..l).map(|i| cw_from(&pm[i])).collect();
                let coroots = (0..l).map(|k| { let mut c = [0; MAX_RANK]; c[k] = 1; c }).collect();
                let e = (0..m).map(|r| (0..l).map(|k| coroot_amb[k][r]).collect()).collect();
                (l, roots, coroots, e)
            }
            Variant::Adjoint => {
                let roots = (0..l).map(|i| { let mut c = [0; MAX_RANK]; c[i] = 1; c }).collect();
                let coroots = (0..l).map(|k| cw_from(&(0..l).map(|i| pm[i][k]).collect::<Vec<_>>())).collect();
                // ω_i∨ = Σ_k mm[i][k] α_k∨ with mm = (pmᵀ)⁻¹.
                let pmt: Vec<Vec<Q>> = (0..l).map(|i| (0..l).map(|k| Q::from_integer(pm[k][i])).collect()).collect();
                let mm = lattice::inverse(&pmt).expect("Cartan matrix is invertible");
                let e = (0..m)
                    .map(|r| (0..l).map(|i| (0..l).map(|k| mm[i][k] * coroot_amb[k][r]).sum()).collect())
                    .collect();
                (l, roots, coroots, e)
            }
            Variant::GL => {
                let n = spec.rank;
                let roots = (0..l).map(|i| { let mut c = [0; MAX_RANK]; c[i] = 1; c[i + 1] = -1; c }).collect();
                let coroots = (0..l).map(|i| { let mut c = [0; MAX_RANK]; c[i] = 1; c[i + 1] = -1; c }).collect();
                let e = (0..n).map(|r| (0..n).map(|k| if r == k { Q::one() } else { Q::zero() }).collect()).collect();
                (n, roots, coroots, e)
            }
        };
        let integral = e.iter().all(|row: &Vec<Q>| row.iter().all(|x| x.is_integer()));
        let label = format!("{spec}");
        Ok(Self::from_simple_system(DatumKind::Top(spec), label, dim, roots, coroots, Ambient { e, integral }))
    }

    /// Generic constructor from simple roots and coroots in a fixed basis.
    pub fn from_simple_system(
        kind: DatumKind,
        label: String,
        dim: usize,
        simple_roots: Vec<Cw>,
        simple_coroots: Vec<Cw>,
        ambient: Ambient,
    ) -> RootDatum {
        assert!(dim <= MAX_RANK);
        let l = simple_roots.len();
        // Root closure under simple reflections, keyed by simple-root coefficients.
        let mut found: HashMap<Vec<i64>, (Cw, Cw)> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..l {
            let mut c = vec![0; l];
            c[i] = 1;
            found.insert(c.clone(), (simple_roots[i], simple_coroots[i]));
            queue.push(c);
        }
        while let Some(c) = queue.pop() {
            let (a, av) = found[&c];
            for j in 0..l {
                let n = dot(&a, &simple_coroots[j]);
                let nv = dot(&simple_roots[j], &av);
                let na = sub(&a, &scale(n, &simple_roots[j]));
                let nav = sub(&av, &scale(nv, &simple_coroots[j]));
                let mut nc = c.clone();
                nc[j] -= n;
                if !found.contains_key(&nc) {
                    found.insert(nc.clone(), (na, nav));
                    queue.push(nc);
                }
            }
        }
        let mut pos: Vec<(Vec<i64>, Cw, Cw)> = found
            .into_iter()
            .filter(|(c, _)| c.iter().all(|&x| x >= 0))
            .map(|(c, (a, av))| (c, a, av))
            .collect();
        pos.sort_by(|a, b| (a.0.iter().sum::<i64>(), &a.0).cmp(&(b.0.iter().sum::<i64>(), &b.0)));
        let n_pos = pos.len();
        let mut roots = Vec::with_capacity(2 * n_pos);
        let mut coroots = Vec::with_capacity(2 * n_pos);
        let mut coeffs = Vec::with_capacity(2 * n_pos);
        for (c, a, av) in &pos {
            roots.push(*a);
            coroots.push(*av);
            coeffs.push(c.clone());
        }
        for (c, a, av) in &pos {
            roots.push(neg(a));
            coroots.push(neg(av));
            coeffs.push(c.iter().map(|x| -x).collect());
        }
        let heights: Vec<i64> = coeffs.iter().map(|c| c.iter().sum()).collect();
        let root_index: HashMap<Cw, usize> = roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let simple: Vec<usize> = (0..l).map(|i| root_index[&simple_roots[i]]).collect();
        let mut two_rho = [0; MAX_RANK];
        for a in &roots[..n_pos] {
            two_rho = add(&two_rho, a);
        }

        let weyl = Self::enumerate_weyl(dim, &roots, &coroots, &simple, &root_index);

        // Components via the Dynkin graph.
        let mut comp_of: Vec<usize> = (0..l).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for i in 0..l {
            for j in 0..l {
                if i != j && dot(&roots[simple[i]], &coroots[simple[j]]) != 0 {
                    let (a, b) = (find(&mut comp_of, i), find(&mut comp_of, j));
                    comp_of[a] = b;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for i in 0..l {
            let r = find(&mut comp_of, i);
            let g = *seen.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        let components: Vec<Component> = groups
            .into_iter()
            .map(|simple_c| {
                let highest = (0..n_pos)
                    .filter(|&a| coeffs[a].iter().enumerate().all(|(k, &x)| x == 0 || simple_c.contains(&k)))
                    .max_by_key(|&a| (heights[a], a))
                    .expect("component has roots");
                let marks = simple_c.iter().map(|&k| coeffs[highest][k]).collect();
                Component { coxeter_number: heights[highest] as usize + 1, simple: simple_c, highest, marks }
            })
            .collect();

        // Barycenter of the base alcove: per component (1/(l_c+1)) Σ ω_i∨ / c_i.
        let simple_cov: Vec<Vec<Q>> = simple.iter().map(|&s| (0..dim).map(|k| Q::from_integer(roots[s][k])).collect()).collect();
        let mut barycenter = vec![Q::zero(); dim];
        if l > 0 {
            // ω_i∨ = Σ_k mm[i][k] α_k∨ with Σ_k mm[i][k] ⟨α_j, α_k∨⟩ = δ_ij.
            let pmt: Vec<Vec<Q>> = (0..l)
                .map(|k| (0..l).map(|j| Q::from_integer(dot(&roots[simple[j]], &coroots[simple[k]]))).collect())
                .collect();
            // pmt[k][j] = ⟨α_j, α_k∨⟩; mm · pmt = I
            let inv = lattice::inverse(&pmt).expect("Cartan matrix invertible");
            for comp in &components {
                let w = Q::new(1, comp.simple.len() as i64 + 1);
                for (pos, &i) in comp.simple.iter().enumerate() {
                    let c = Q::from_integer(comp.marks[pos]);
                    for k in 0..l {
                        for (d, b) in barycenter.iter_mut().enumerate() {
                            *b += w * inv[i][k] * Q::from_integer(coroots[simple[k]][d]) / c;
                        }
                    }
                }
            }
            debug_assert!(simple_cov.iter().all(|a| {
                let v: Q = a.iter().zip(&barycenter).map(|(x, y)| x * y).sum();
                v > Q::zero() && v < Q::one()
            }));
        }

        let lambda_g = LatticeQuotient::new(&simple.iter().map(|&s| coroots[s]).collect::<Vec<_>>(), dim);
        let root_rows: Vec<Vec<i64>> = roots[..n_pos].iter().map(|r| r[..dim].to_vec()).collect();
        let central: Vec<Cw> = lattice::integer_kernel(&root_rows, dim).iter().map(|v| cw_from(v)).collect();
        let reflections = (0..roots.len())
            .map(|a| weyl.lookup(&reflection_matrix(&roots[a], &coroots[a], dim)).expect("reflection in W"))
            .collect();

        let mut d = RootDatum {
            kind,
            label,
            dim,
            roots,
            coroots,
            coeffs,
            heights,
            n_pos,
            simple,
            two_rho,
            weyl,
            components,
            ambient,
            lambda_g,
            barycenter,
            central,
            gens: Vec::new(),
            root_index,
            reflections,
            cache: Default::default(),
        };
        d.gens = crate::affine_weyl::build_gens(&d);
        d
    }

    fn enumerate_weyl(dim: usize, roots: &[Cw], coroots: &[Cw], simple: &[usize], root_index: &HashMap<Cw, usize>) -> WeylGroup {
        let gens: Vec<Mat> = simple.iter().map(|&s| reflection_matrix(&roots[s], &coroots[s], dim)).collect();
        let mut mats = vec![mat_identity()];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut index: HashMap<Mat, WId> = HashMap::new();
        index.insert(mat_identity(), 0);
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &p in &level {
                for (j, g) in gens.iter().enumerate() {
                    let m = mat_mul(&mats[p], g);
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(m) {
                        e.insert(mats.len() as WId);
                        let mut w = words[p].clone();
                        w.push(j as u8);
                        words.push(w);
                        mats.push(m);
                        next.push(mats.len() - 1);
                    }
                }
            }
            level = next;
        }
        let n = mats.len();
        let mut mult = vec![0 as WId; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = index[&mat_mul(&mats[a], &mats[b])];
            }
        }
        let inv: Vec<WId> = (0..n).map(|a| (0..n).find(|&b| mult[a * n + b] == 0).unwrap() as WId).collect();
        let nroots = roots.len();
        let mut root_perm = vec![0u16; n * nroots];
        for w in 0..n {
            // (wα)(λ) = α(w⁻¹λ): covector α · M_{w⁻¹}
            let mi = &mats[inv[w] as usize];
            for (a, r) in roots.iter().enumerate() {
                let cov: Cw = std::array::from_fn(|k| (0..MAX_RANK).map(|i| r[i] * mi[i][k]).sum());
                root_perm[w * nroots + a] = root_index[&cov] as u16;
            }
        }
        let n_pos = nroots / 2;
        let len = (0..n)
            .map(|w| (0..n_pos).filter(|&a| (root_perm[w * nroots + a] as usize) >= n_pos).count() as u32)
            .collect();
        WeylGroup { mats, words, len, mult, inv, root_perm, nroots, index }
    }

    /// Semisimple rank.
    pub fn ss_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn nroots(&self) -> usize {
        self.roots.len()
    }

    #[inline]
    pub fn is_positive(&self, a: usize) -> bool {
        a < self.n_pos
    }

    /// Index of −α.
    #[inline]
    pub fn neg_root(&self, a: usize) -> usize {
        if a < self.n_pos { a + self.n_pos } else { a - self.n_pos }
    }

    /// ⟨α, λ⟩.
    #[inline]
    pub fn pairing(&self, a: usize, l: &Cw) -> i64 {
        dot(&self.roots[a], l)
    }

    /// w·λ.
    #[inline]
    pub fn weyl_act(&self, w: WId, l: &Cw) -> Cw {
        self.weyl.act(w, l)
    }

    /// Reflection s_α as a Weyl element.
    pub fn reflection(&self, a: usize) -> WId {
        self.reflections[a]
    }

    /// Simple reflection at 0-based position `i`.
    pub fn simple_reflection(&self, i: usize) -> WId {
        self.reflections[self.simple[i]]
    }

    pub fn longest(&self) -> WId {
        (self.weyl.order() - 1) as WId
    }

    pub fn root_of(&self, cov: &Cw) -> Option<usize> {
        self.root_index.get(cov).copied()
    }

    /// Whether the datum is semisimple (no central cocharacters).
    pub fn is_semisimple(&self) -> bool {
        self.central.is_empty()
    }

    /// Largest Coxeter number over the components (0 for a torus).
    pub fn coxeter_number(&self) -> usize {
        self.components.iter().map(|c| c.coxeter_number).max().unwrap_or(0)
    }

    /// Canonical JSON description; the datum is always rebuilt from it.
    pub fn canonical_json(&self) -> serde_json::Value {
        match &self.kind {
            DatumKind::Top(s) => serde_json::json!({"type": format!("{:?}", s.family), "rank": s.rank, "variant": s.variant_name()}),
            DatumKind::Levi { parent, roots } => serde_json::json!({
                "type": format!("{:?}", parent.family), "rank": parent.rank, "variant": parent.variant_name(), "levi_roots": roots
            }),
        }
    }

    pub fn spec(&self) -> DatumSpec {
        match &self.kind {
            DatumKind::Top(s) => *s,
            DatumKind::Levi { parent, .. } => *parent,
        }
    }

    /// Coweight in display coordinates (ambient when integral, else basis).
    pub fn display_coords(&self, l: &Cw) -> Vec<i64> {
        if self.ambient.integral {
            let v: Vec<Q> = (0..self.dim).map(|k| Q::from_integer(l[k])).collect();
            self.ambient.apply(&v).iter().map(|x| x.to_integer()).collect()
        } else {
            l[..self.dim].to_vec()
        }
    }

    /// Inverse of [`display_coords`](Self::display_coords).
    pub fn from_display_coords(&self, v: &[i64]) -> Result<Cw, Error> {
        if self.ambient.integral {
            if v.len() != self.ambient.m() {
                return Err(Error::Parse(format!("expected {} coordinates, got {}", self.ambient.m(), v.len())));
            }
            let q: Vec<Q> = v.iter().map(|&x| Q::from_integer(x)).collect();
            let c = self
                .ambient
                .solve(&q)
                .and_then(|c| (self.ambient.apply(&c) == q).then_some(c))
                .and_then(|c| lattice::to_integers(&c))
                .ok_or_else(|| Error::Parse(format!("{v:?} is not in X_*(A)")))?;
            Ok(cw_from(&c))
        } else {
            if v.len() != self.dim {
                return Err(Error::Parse(format!("expected {} coordinates, got {}", self.dim, v.len())));
            }
            Ok(cw_from(v))
        }
    }

    /// `a,b,c` in display coordinates.
    pub fn fmt_coweight(&self, l: &Cw) -> String {
        self.display_coords(l).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Rational coweight in ambient coordinates.
    pub fn ambient_rational(&self, r: &RatCw) -> Vec<Q> {
        let v: Vec<Q> = (0..self.dim).map(|k| Q::new(r.num[k], r.den)).collect();
        self.ambient.apply(&v)
    }

    /// Root index of the covector whose display is requested, as `e1-e3` style text.
    pub fn fmt_root(&self, a: usize) -> String {
        let c = &self.coeffs[a];
        let mut s = String::new();
        for (i, &x) in c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if !s.is_empty() && x > 0 {
                s.push('+');
            }
            match x {
                1 => {}
                -1 => s.push('-'),
                _ => s.push_str(&x.to_string()),
            }
            s.push_str(&format!("a{}", i + 1));
        }
        s
    }

    fn weyl_subgroup(&self, generators: &[WId]) -> Vec<bool> {
        let mut inside = vec![false; self.weyl.order()];
        inside[0] = true;
        let mut stack = vec![0 as WId];
        while let Some(x) = stack.pop() {
            for &g in generators {
                let y = self.weyl.mul(x, g);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }

    /// Levi subgroup with the given root set (closed under negation).
    pub fn levi(&self, mut roots_m: Vec<usize>) -> Levi {
        roots_m.sort_unstable();
        roots_m.dedup();
        let mut in_m = vec![false; self.nroots()];
        for &a in &roots_m {
            in_m[a] = true;
        }
        let pos: Vec<usize> = roots_m.iter().copied().filter(|&a| self.is_positive(a)).collect();
        // Simple roots of R_M ∩ R⁺: not a sum of two roots of R_M ∩ R⁺.
        let simple_m: Vec<usize> = pos
            .iter()
            .copied()
            .filter(|&b| {
                !pos.iter().any(|&g| {
                    let d = sub(&self.roots[b], &self.roots[g]);
                    self.root_of(&d).is_some_and(|x| self.is_positive(x) && in_m[x])
                })
            })
            .collect();
        let w_m = self.weyl_subgroup(&simple_m.iter().map(|&a| self.reflection(a)).collect::<Vec<_>>());
        let quotient = LatticeQuotient::new(&roots_m.iter().map(|&a| self.coroots[a]).collect::<Vec<_>>(), self.dim);
        let z_rows: Vec<Vec<i64>> = pos.iter().map(|&a| self.roots[a][..self.dim].to_vec()).collect();
        let central = lattice::integer_kernel(&z_rows, self.dim).iter().map(|v| cw_from(v)).collect();
        Levi { roots: roots_m, in_m, simple_m, w_m, quotient, central }
    }

    /// The semistandard parabolic ᵘP_J with canonical (minimal) u.
    pub fn parabolic(&self, u: WId, j: &[usize]) -> Parabolic {
        let mut j: Vec<usize> = j.to_vec();
        j.sort_unstable();
        j.dedup();
        let in_j = |a: usize| self.coeffs[a].iter().enumerate().all(|(k, &x)| x == 0 || j.contains(&k));
        // Canonical u: the minimal element of u·W_J.
        let wj = self.weyl_subgroup(&j.iter().map(|&i| self.simple_reflection(i)).collect::<Vec<_>>());
        let u = (0..self.weyl.order() as WId)
            .filter(|&v| wj[v as usize])
            .map(|v| self.weyl.mul(u, v))
            .min_by_key(|&x| (self.weyl.len[x as usize], x))
            .unwrap();
        let mut in_n = vec![false; self.nroots()];
        let mut roots_m = Vec::new();
        for a in 0..self.nroots() {
            let ua = self.weyl.act_root(u, a);
            if in_j(a) {
                roots_m.push(ua);
            } else if self.is_positive(a) {
                in_n[ua] = true;
            }
        }
        let levi = self.levi(roots_m);
        let mut two_rho_n = [0; MAX_RANK];
        for (a, _) in in_n.iter().enumerate().filter(|(_, &n)| n) {
            two_rho_n = add(&two_rho_n, &self.roots[a]);
        }
        Parabolic { u, j, in_n, levi, two_rho_n }
    }

    /// The standard parabolic P_J.
    pub fn standard_parabolic(&self, j: &[usize]) -> Parabolic {
        self.parabolic(0, j)
    }

    /// All semistandard parabolics, each exactly once, ordered by decreasing |J|.
    pub fn semistandard_parabolics(&self) -> &[Parabolic] {
        self.cache.parabolics.get_or_init(|| {
            let l = self.ss_rank();
            let mut subsets: Vec<Vec<usize>> = (0..1u32 << l)
                .map(|m| (0..l).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            subsets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
            let mut out = Vec::new();
            for j in subsets {
                for u in self.weyl.elements() {
                    // minimal coset representatives: u(α_j) > 0 for j ∈ J
                    if j.iter().all(|&i| self.is_positive(self.weyl.act_root(u, self.simple[i]))) {
                        out.push(self.parabolic(u, &j));
                    }
                }
            }
            out
        })
    }

    /// Distinct semistandard Levis, ordered by increasing |R_M|.
    pub fn semistandard_levis(&self) -> &[Levi] {
        self.cache.levis.get_or_init(|| {
            let mut seen = std::collections::HashSet::new();
            let mut out: Vec<Levi> = Vec::new();
            for p in self.semistandard_parabolics() {
                if seen.insert(p.levi.roots.clone()) {
                    out.push(p.levi.clone());
                }
            }
            out.sort_by(|a, b| (a.roots.len(), &a.roots).cmp(&(b.roots.len(), &b.roots)));
            out
        })
    }

    /// The Levi with no roots (the maximal torus A).
    pub fn torus_levi(&self) -> Levi {
        self.levi(Vec::new())
    }

    /// G itself as a Levi.
    pub fn full_levi(&self) -> Levi {
        self.levi((0..self.nroots()).collect())
    }

    /// η_M on translation parts: the class of λ in Λ_M = X_*(A)/Q∨_M.
    pub fn eta_finite(&self, l: &Cw, m: &Levi) -> LatticeClass {
        m.quotient.class(l)
    }
}

/// A semistandard Levi subgroup, identified by its root set.
#[derive(Clone, Debug)]
pub struct Levi {
    /// Sorted root indices of R_M.
    pub roots: Vec<usize>,
    pub in_m: Vec<bool>,
    /// Simple roots of R_M ∩ R⁺.
    pub simple_m: Vec<usize>,
    /// Membership of W elements in W_M.
    pub w_m: Vec<bool>,
    /// Λ_M = X_*(A)/Q∨_M.
    pub quotient: LatticeQuotient,
    /// Integer basis of the central cocharacters of M.
    pub central: Vec<Cw>,
}

impl PartialEq for Levi {
    fn eq(&self, other: &Self) -> bool {
        self.roots == other.roots
    }
}
impl Eq for Levi {}

impl Levi {
    pub fn contains_weyl(&self, w: WId) -> bool {
        self.w_m[w as usize]
    }

    pub fn order_w(&self) -> usize {
        self.w_m.iter().filter(|&&b| b).count()
    }

    /// Whether R_M ⊇ R_other.
    pub fn contains_levi(&self, other: &Levi) -> bool {
        other.roots.iter().all(|&a| self.in_m[a])
    }

    pub fn is_torus(&self) -> bool {
        self.roots.is_empty()
    }
}

/// A semistandard parabolic ᵘP_J = MN together with derived data.
#[derive(Clone, Debug)]
pub struct Parabolic {
    /// Minimal-length conjugator.
    pub u: WId,
    /// 0-based positions into `simple`.
    pub j: Vec<usize>,
    /// Membership of roots in R_N.
    pub in_n: Vec<bool>,
    pub levi: Levi,
    /// 2ρ_N.
    pub two_rho_n: Cw,
}

impl PartialEq for Parabolic {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.j == other.j
    }
}
impl Eq for Parabolic {}

impl Parabolic {
    pub fn is_standard(&self) -> bool {
        self.u == 0
    }

    /// P = G.
    pub fn is_group(&self, d: &RootDatum) -> bool {
        self.j.len() == d.ss_rank()
    }

    /// P ⊇ ʷB, i.e. R_N ⊆ w(R⁺).
    pub fn contains_borel(&self, d: &RootDatum, w: WId) -> bool {
        (0..d.nroots()).filter(|&a| self.in_n[a]).all(|a| d.is_positive(d.weyl.act_root(d.weyl.inv(w), a)))
    }

    pub fn describe(&self, d: &RootDatum) -> String {
        format!(
            "P(u={}, J={{{}}})",
            fmt_weyl_word(d, self.u),
            self.j.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// `s1s2` style word of a finite Weyl element, `e` for the identity.
pub fn fmt_weyl_word(d: &RootDatum, w: WId) -> String {
    let word = &d.weyl.words[w as usize];
    if word.is_empty() {
        "e".into()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// A rational coweight num/den with den > 0 in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatCw {
    pub num: Cw,
    pub den: i64,
}

impl RatCw {
    pub fn new(num: Cw, den: i64) -> Self {
        assert!(den != 0);
        let mut g = den.abs();
        for x in num {
            g = num_integer::gcd(g, x);
        }
        let s = if den < 0 { -1 } else { 1 };
        RatCw { num: std::array::from_fn(|i| s * num[i] / g), den: s * den / g }
    }

    pub fn integral(l: Cw) -> Self {
        RatCw { num: l, den: 1 }
    }

    pub fn zero() -> Self {
        RatCw { num: [0; MAX_RANK], den: 1 }
    }

    /// ⟨α, ν⟩ as a rational.
    pub fn pair(&self, cov: &Cw) -> Q {
        Q::new(dot(cov, &self.num), self.den)
    }

    pub fn add(&self, o: &RatCw) -> RatCw {
        RatCw::new(std::array::from_fn(|i| self.num[i] * o.den + o.num[i] * self.den), self.den * o.den)
    }

    pub fn sub(&self, o: &RatCw) -> RatCw {
        self.add(&RatCw { num: neg(&o.num), den: o.den })
    }

    pub fn to_integral(&self) -> Option<Cw> {
        (self.den == 1).then_some(self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn coords(&self, dim: usize) -> Vec<Q> {
        (0..dim).map(|k| Q::new(self.num[k], self.den)).collect()
    }
}

/// Parses a subset such as `{1,2}` or `1,2` (1-based) into 0-based positions.
pub fn parse_subset(s: &str) -> Result<Vec<usize>, Error> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Parse(format!("bad subset {s}")))
}

/// Helper for tests and callers: 0-based positions from 1-based labels.
pub fn j_set(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|k| k - 1).collect()
}
