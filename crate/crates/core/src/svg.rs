//! SVG rendering of rank-2 alcove pictures: the arrangement lines over a
//! window, lowest-cell alcoves shaded by piece, the base alcove in
//! black, and markers on the maximal-weight alcoves.

use crate::geometry::{rat, Rat, TypeGeometry};
use crate::group::Ball;
use crate::lowest::solve_linear;

/// Map from the internal coordinates to picture coordinates.
pub struct Chart {
    pub a: [[f64; 2]; 2],
    cols: usize,
    basis: Vec<Vec<f64>>,
}

impl Chart {
    /// Identity-ish chart for full-dimensional rank-2 types; the
    /// double-parameter chain uses the rotated picture frame so the base
    /// alcove lands on the triangle (0,0), (0,1), (1/2,1/2).
    pub fn for_type(geom: &TypeGeometry) -> Chart {
        match geom.group_type {
            crate::geometry::GroupType::C(2) => Chart {
                a: [[1.0, -1.0], [1.0, 1.0]],
                cols: 2,
                basis: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
            crate::geometry::GroupType::G2 => {
                // Orthonormal-ish basis of the sum-zero plane.
                let s = 1.0 / 2f64.sqrt();
                let t = 1.0 / 6f64.sqrt();
                Chart {
                    a: [[1.0, 0.0], [0.0, 1.0]],
                    cols: 3,
                    basis: vec![vec![s, -s, 0.0], vec![t, t, -2.0 * t]],
                }
            }
            _ => Chart {
                a: [[1.0, 0.0], [0.0, 1.0]],
                cols: 2,
                basis: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
        }
    }

    pub fn apply(&self, p: &[Rat]) -> (f64, f64) {
        let coords: Vec<f64> = p
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        let mut u = 0.0;
        let mut v = 0.0;
        for c in 0..self.cols.min(coords.len()) {
            u += self.basis[0][c] * coords[c];
            v += self.basis[1][c] * coords[c];
        }
        (
            self.a[0][0] * u + self.a[0][1] * v,
            self.a[1][0] * u + self.a[1][1] * v,
        )
    }
}

const PALETTE: [&str; 12] = [
    "#c6dbef", "#fdd0a2", "#c7e9c0", "#dadaeb", "#f4cccc", "#fff2ae",
    "#d9f0d3", "#fde0ef", "#e6f5c9", "#e0ecf4", "#fee6ce", "#e5d8bd",
];

/// Vertices of the fundamental alcove for a rank-2 type: pairwise
/// intersections of its three walls.
fn base_alcove_vertices(geom: &TypeGeometry) -> Vec<Vec<Rat>> {
    let n = geom.n_gens();
    assert_eq!(n, 3, "only rank-2 pictures are supported");
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for &k in &[i, j] {
                let (fam, off) = geom.walls[k];
                rows.push(geom.families[fam].root.clone());
                rhs.push(rat(off));
            }
            if geom.sum_zero {
                rows.push(vec![rat(1); geom.dim]);
                rhs.push(rat(0));
            }
            if let Some(v) = solve_linear(&rows, &rhs) {
                out.push(v);
            }
        }
    }
    out
}

/// Render the ball's alcoves. `piece_of` gives the shading piece per
/// ball id (`None` = unshaded); `starred` ids get a marker.
pub fn render_rank2(
    geom: &TypeGeometry,
    ball: &Ball,
    piece_of: &[Option<usize>],
    starred: &[usize],
    window: f64,
) -> String {
    let chart = Chart::for_type(geom);
    let scale = 40.0;
    let half = window * scale;
    let size = 2.0 * half;
    let to_pix = |(u, v): (f64, f64)| (half + u * scale, half - v * scale);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    let verts0 = base_alcove_vertices(geom);
    // Shaded alcoves first.
    for id in 0..ball.len() {
        let fill = match piece_of.get(id) {
            Some(Some(q)) => PALETTE[q % PALETTE.len()],
            _ if id == 0 => "black",
            _ => continue,
        };
        let fill = if id == 0 { "black" } else { fill };
        let pts: Vec<(f64, f64)> = verts0
            .iter()
            .map(|v| to_pix(chart.apply(&ball.elements[id].fwd.apply(v))))
            .collect();
        if pts
            .iter()
            .any(|&(x, y)| x < -size || x > 2.0 * size || y < -size || y > 2.0 * size)
        {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"none\"/>\n",
            path.join(" "),
            fill
        ));
    }
    // Arrangement lines: segments of each family inside the window.
    let wrat = window.ceil() as i64 + 2;
    for f in 0..geom.families.len() {
        // Two spanning points of the hyperplane per offset: solve with a
        // complement direction.
        for off in -4 * wrat..=4 * wrat {
            let mut rows = vec![geom.families[f].root.clone()];
            let mut rhs = vec![rat(off)];
            if geom.sum_zero {
                rows.push(vec![rat(1); geom.dim]);
                rhs.push(rat(0));
            }
            let Some(p) = solve_linear(&rows, &rhs) else {
                continue;
            };
            // Direction inside the hyperplane: orthogonal complement of
            // the root (projected into the sum-zero plane when needed).
            let root = &geom.families[f].root;
            let dir: Vec<f64> = match geom.dim {
                2 => vec![
                    -(*root[1].numer() as f64 / *root[1].denom() as f64),
                    *root[0].numer() as f64 / *root[0].denom() as f64,
                ],
                3 => {
                    let r: Vec<f64> = root
                        .iter()
                        .map(|x| *x.numer() as f64 / *x.denom() as f64)
                        .collect();
                    // Cross product with (1,1,1) stays in the plane.
                    vec![r[1] - r[2], r[2] - r[0], r[0] - r[1]]
                }
                _ => continue,
            };
            let p0: Vec<f64> = p
                .iter()
                .map(|x| *x.numer() as f64 / *x.denom() as f64)
                .collect();
            let reach = 4.0 * window;
            let proj = |pt: &[f64]| {
                let mut u = 0.0;
                let mut v = 0.0;
                for c in 0..chart.cols.min(pt.len()) {
                    u += chart.basis[0][c] * pt[c];
                    v += chart.basis[1][c] * pt[c];
                }
                (
                    chart.a[0][0] * u + chart.a[0][1] * v,
                    chart.a[1][0] * u + chart.a[1][1] * v,
                )
            };
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let a: Vec<f64> = p0
                .iter()
                .zip(&dir)
                .map(|(x, d)| x - reach * d / norm)
                .collect();
            let b: Vec<f64> = p0
                .iter()
                .zip(&dir)
                .map(|(x, d)| x + reach * d / norm)
                .collect();
            let (x1, y1) = to_pix(proj(&a));
            let (x2, y2) = to_pix(proj(&b));
            if (x1 < 0.0 && x2 < 0.0)
                || (x1 > size && x2 > size)
                || (y1 < 0.0 && y2 < 0.0)
                || (y1 > size && y2 > size)
            {
                continue;
            }
            svg.push_str(&format!(
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#888\" stroke-width=\"0.5\"/>\n"
            ));
        }
    }
    // Markers.
    for &id in starred {
        let bary = {
            let pts: Vec<(f64, f64)> = verts0
                .iter()
                .map(|v| chart.apply(&ball.elements[id].fwd.apply(v)))
                .collect();
            let n = pts.len() as f64;
            (
                pts.iter().map(|p| p.0).sum::<f64>() / n,
                pts.iter().map(|p| p.1).sum::<f64>() / n,
            )
        };
        let (x, y) = to_pix(bary);
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"14\" text-anchor=\"middle\">*</text>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GroupType;
    use crate::lowest::{cmin_window, quarters, Quarter};

    #[test]
    fn svg_rank2_smoke() {
        let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
        let l = geom.int_weights(&[2, 1, 1]).unwrap();
        let ball = Ball::new(&geom, 8);
        let qs: Vec<Quarter> = quarters(&geom, &l).unwrap();
        let window = cmin_window(&geom, &ball, &qs);
        let piece: Vec<Option<usize>> = window.iter().map(|&(_, q)| q).collect();
        let svg = render_rank2(&geom, &ball, &piece, &[3], 6.0);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polygon"));
        assert!(svg.contains("</svg>"));
        // Deterministic output.
        let svg2 = render_rank2(&geom, &ball, &piece, &[3], 6.0);
        assert_eq!(svg, svg2);
    }
}
