//! Two-parameter maximization: coarse grid scan followed by Nelder-Mead.
//!
//! Every optimized quantity in the crate (classical correlations over
//! measurement angles, Gaussian discord over general-dyne parameters) is a
//! smooth function of two real parameters, so one shared routine covers
//! them all. Objectives must be total functions of the plane; periodic or
//! reparametrized domains are handled by the caller.

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub(crate) struct OptimOutcome {
    pub point: [f64; 2],
    pub value: f64,
}

/// Maximizes `f` over the rectangle, scanning an `na x nb` grid and then
/// refining from the three best grid points with Nelder-Mead.
///
/// The returned value is never below the best grid value: if refinement
/// fails to improve, the grid optimum is kept.
pub(crate) fn grid_then_refine<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    a_range: (f64, f64),
    na: usize,
    b_range: (f64, f64),
    nb: usize,
) -> OptimOutcome {
    assert!(na >= 2 && nb >= 2, "grid needs at least two points per axis");
    let step_a = (a_range.1 - a_range.0) / (na - 1) as f64;
    let step_b = (b_range.1 - b_range.0) / (nb - 1) as f64;

    let mut evaluated: Vec<([f64; 2], f64)> = Vec::with_capacity(na * nb);
    for i in 0..na {
        let a = a_range.0 + step_a * i as f64;
        for j in 0..nb {
            let b = b_range.0 + step_b * j as f64;
            evaluated.push(([a, b], f(a, b)));
        }
    }
    evaluated.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("objective must be finite"));
    let grid_best = evaluated[0];

    let simplex = initial_simplex(&evaluated, step_a.abs(), step_b.abs());
    let refined = nelder_mead_max(&mut f, simplex, 1e-6, 200);

    if refined.value > grid_best.1 {
        OptimOutcome {
            point: refined.point,
            value: refined.value,
        }
    } else {
        OptimOutcome {
            point: grid_best.0,
            value: grid_best.1,
        }
    }
}

/// Builds the starting simplex from the three best grid points, falling
/// back to an axis-aligned simplex around the best point whenever the top
/// three are (nearly) collinear.
fn initial_simplex(sorted: &[([f64; 2], f64)], step_a: f64, step_b: f64) -> [[f64; 2]; 3] {
    let best = sorted[0].0;
    if sorted.len() >= 3 {
        let candidate = [sorted[0].0, sorted[1].0, sorted[2].0];
        let area = {
            let u = [candidate[1][0] - candidate[0][0], candidate[1][1] - candidate[0][1]];
            let v = [candidate[2][0] - candidate[0][0], candidate[2][1] - candidate[0][1]];
            (u[0] * v[1] - u[1] * v[0]).abs() * 0.5
        };
        if area > 1e-12 * (step_a * step_b).max(1e-300) {
            return candidate;
        }
    }
    [
        best,
        [best[0] + step_a.max(1e-8), best[1]],
        [best[0], best[1] + step_b.max(1e-8)],
    ]
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMeadResult {
    pub point: [f64; 2],
    pub value: f64,
}

/// Nelder-Mead maximization in two dimensions.
///
/// Stops when the simplex diameter falls below `diameter_tol` or after
/// `max_iter` iterations, whichever comes first.
pub(crate) fn nelder_mead_max<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    simplex: [[f64; 2]; 3],
    diameter_tol: f64,
    max_iter: usize,
) -> NelderMeadResult {
    let mut vertices: Vec<([f64; 2], f64)> = simplex
        .iter()
        .map(|&p| (p, f(p[0], p[1])))
        .collect();

    for _ in 0..max_iter {
        // Descending by value: vertices[0] is the current best.
        vertices.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("objective must be finite"));
        if diameter(&vertices) < diameter_tol {
            break;
        }

        let centroid = [
            (vertices[0].0[0] + vertices[1].0[0]) / 2.0,
            (vertices[0].0[1] + vertices[1].0[1]) / 2.0,
        ];
        let worst = vertices[2];

        let reflect = step(centroid, worst.0, REFLECTION);
        let f_reflect = f(reflect[0], reflect[1]);

        if f_reflect > vertices[0].1 {
            let expand = step(centroid, worst.0, EXPANSION);
            let f_expand = f(expand[0], expand[1]);
            vertices[2] = if f_expand > f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
            continue;
        }
        if f_reflect > vertices[1].1 {
            vertices[2] = (reflect, f_reflect);
            continue;
        }

        let contract = step(centroid, worst.0, -CONTRACTION);
        let f_contract = f(contract[0], contract[1]);
        if f_contract > worst.1 {
            vertices[2] = (contract, f_contract);
            continue;
        }

        // Shrink toward the best vertex.
        let best = vertices[0].0;
        for vertex in vertices.iter_mut().skip(1) {
            let p = [
                best[0] + SHRINK * (vertex.0[0] - best[0]),
                best[1] + SHRINK * (vertex.0[1] - best[1]),
            ];
            *vertex = (p, f(p[0], p[1]));
        }
    }

    vertices.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("objective must be finite"));
    NelderMeadResult {
        point: vertices[0].0,
        value: vertices[0].1,
    }
}

/// Point reflected through the centroid: `centroid + coeff * (centroid - worst)`.
fn step(centroid: [f64; 2], worst: [f64; 2], coeff: f64) -> [f64; 2] {
    [
        centroid[0] + coeff * (centroid[0] - worst[0]),
        centroid[1] + coeff * (centroid[1] - worst[1]),
    ]
}

fn diameter(vertices: &[([f64; 2], f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let dx = vertices[i].0[0] - vertices[j].0[0];
            let dy = vertices[i].0[1] - vertices[j].0[1];
            d = d.max(dx.hypot(dy));
        }
    }
    d
}
