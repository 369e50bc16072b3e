//! Rank-2 alcove pictures. Alcove vertices are exact rationals; floats only
//! appear when projecting to the page.

use adlv::lattice::{solve_rational, Q};
use adlv::{ExtAffWeylElt, RootDatum};
use anyhow::{bail, Result};
use num_traits::{ToPrimitive, Zero};

use crate::survey::SurveyRecord;

const WIDTH: f64 = 900.0;
const MARGIN: f64 = 20.0;

/// Vertices of the base alcove, indexed like the affine generators: vertex g
/// is the one opposite the wall of generator g.
fn base_vertices(d: &RootDatum) -> Result<Vec<Vec<Q>>> {
    if d.ss_rank() != 2 || d.dim != 2 || d.components.len() != 1 {
        bail!("figures need an irreducible semisimple datum of rank 2, got {}", d.label);
    }
    let comp = &d.components[0];
    let a: Vec<Vec<Q>> = d.simple.iter().map(|&s| (0..2).map(|k| Q::from_integer(d.roots[s][k])).collect()).collect();
    let mut out = vec![vec![Q::zero(); 2]];
    for i in 0..2 {
        let rhs: Vec<Q> = (0..2).map(|j| if i == j { Q::new(1, comp.marks[i]) } else { Q::zero() }).collect();
        out.push(solve_rational(&a, &rhs).expect("simple roots are a basis"));
    }
    Ok(out)
}

/// x·v for a rational point v.
fn act(d: &RootDatum, x: &ExtAffWeylElt, v: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = (0..2).map(|k| Q::from_integer(x.lambda[k])).collect();
    for (k, vk) in v.iter().enumerate() {
        let mut e = [0; 6];
        e[k] = 1;
        let col = d.weyl.act(x.w, &e);
        for (r, o) in out.iter_mut().enumerate() {
            *o += vk * Q::from_integer(col[r]);
        }
    }
    out
}

/// Orthonormal page coordinates of a rational point.
struct Projection {
    basis: [Vec<f64>; 2],
    amb: Vec<Vec<f64>>,
}

impl Projection {
    fn new(d: &RootDatum) -> Self {
        let amb: Vec<Vec<f64>> =
            d.ambient.e.iter().map(|row| row.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect()).collect();
        let col = |k: usize| -> Vec<f64> { amb.iter().map(|row| row[k]).collect() };
        let dotf = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let u = col(0);
        let nu = dotf(&u, &u).sqrt();
        let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let v = col(1);
        let p = dotf(&v, &u);
        let v: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - p * b).collect();
        let nv = dotf(&v, &v).sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
        Projection { basis: [u, v], amb }
    }

    fn point(&self, v: &[Q]) -> (f64, f64) {
        let vf: Vec<f64> = v.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect();
        let a: Vec<f64> = self.amb.iter().map(|row| row.iter().zip(&vf).map(|(x, y)| x * y).sum()).collect();
        let c = |b: &Vec<f64>| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        (c(&self.basis[0]), -c(&self.basis[1]))
    }
}

/// SVG of the given alcoves: grey when non-empty (labelled with the
/// dimension), white when empty, pale yellow when empty only up to the
/// cutoff; the base alcove is black and the shrunken chambers are outlined.
pub fn render_svg(d: &RootDatum, items: &[(ExtAffWeylElt, SurveyRecord)]) -> Result<String> {
    let base = base_vertices(d)?;
    let proj = Projection::new(d);
    let polys: Vec<Vec<(f64, f64)>> =
        items.iter().map(|(x, _)| base.iter().map(|v| proj.point(&act(d, x, v))).collect()).collect();
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    for p in polys.iter().flatten() {
        lo = (lo.0.min(p.0), lo.1.min(p.1));
        hi = (hi.0.max(p.0), hi.1.max(p.1));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    let s = (WIDTH - 2.0 * MARGIN) / span;
    let tr = |p: (f64, f64)| ((p.0 - lo.0) * s + MARGIN, (p.1 - lo.1) * s + MARGIN);
    let height = (hi.1 - lo.1) * s + 2.0 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH:.0} {height:.0}\">\n<title>{}: {}</title>\n",
        d.label,
        items.first().map_or("", |(_, r)| r.class_key.as_str())
    );
    let font = (s * 0.12).clamp(4.0, 16.0);
    for ((_, rec), poly) in items.iter().zip(&polys) {
        let fill = if rec.length == 0 {
            "#000000"
        } else {
            match rec.status.as_str() {
                "nonempty" => "#b4b4b4",
                "empty-up-to-cutoff" => "#fff1b8",
                _ => "#ffffff",
            }
        };
        let pts: Vec<String> = poly.iter().map(|&p| {
            let q = tr(p);
            format!("{:.2},{:.2}", q.0, q.1)
        }).collect();
        out.push_str(&format!("<polygon points=\"{}\" fill=\"{fill}\" stroke=\"#808080\" stroke-width=\"0.5\"><title>{}</title></polygon>\n", pts.join(" "), rec.word));
        if let Some(k) = rec.dim {
            let c = poly.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / 3.0, a.1 + p.1 / 3.0));
            let c = tr(c);
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"{font:.1}\" fill=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{k}</text>\n",
                c.0,
                c.1,
                if rec.length == 0 { "#ffffff" } else { "#000000" }
            ));
        }
    }
    // Walls between shrunken and non-shrunken alcoves.
    for ((x, rec), poly) in items.iter().zip(&polys) {
        if !rec.shrunken {
            continue;
        }
        for g in 0..d.gens.len() {
            if d.is_shrunken(&d.mul_gen(x, g)) {
                continue;
            }
            let e: Vec<(f64, f64)> = (0..3).filter(|&k| k != g).map(|k| tr(poly[k])).collect();
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#000000\" stroke-width=\"2.5\"/>\n",
                e[0].0, e[0].1, e[1].0, e[1].1
            ));
        }
    }
    let o = tr(proj.point(&[Q::zero(), Q::zero()]));
    out.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#000000\" stroke=\"#ffffff\" stroke-dasharray=\"1,1\"/>\n", o.0, o.1));
    out.push_str("</svg>\n");
    Ok(out)
}
