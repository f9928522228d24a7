//! Discrete harmonic analysis on weighted graphs: the excess (Laplacian)
//! operator, potential solvers for battery and unit-current problems,
//! effective resistance, expected visit counts, and closed-form Fourier
//! solutions on the torus.
//!
//! The excess of f at v is `sum over non-self edges vy of [f(v)-f(y)] w(vy)`;
//! self-edges contribute zero, since the term `[f(v)-f(v)] w` cancels. All
//! battery solutions satisfy a maximum principle (extrema on the boundary
//! pair), which the solvers assert on every solve.

use num_traits::{ToPrimitive, Zero};

use crate::graph::{torus_vertex, Graph, VertexId};
use crate::linalg::{solve_f64, solve_rational, Matrix};
use crate::{rat_int, Error, Rat, Result};

/// A vertex-indexed scalar function, defined up to an additive constant.
/// The stored representative pins `values[reference]`, to zero for
/// unit-current potentials and to the grounded terminal for batteries.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    pub values: Vec<T>,
    pub reference: VertexId,
}

impl<T: Clone> Potential<T> {
    pub fn value(&self, v: VertexId) -> &T {
        &self.values[v]
    }
}

/// Vertex-indexed matrix of the excess operator: symmetric, rows sum to
/// zero, diagonal the self-edge-free degree.
pub fn laplacian(g: &Graph) -> Matrix<Rat> {
    let n = g.vertex_count();
    let mut m = Matrix::from_fn(n, |_, _| Rat::zero());
    for edge in g.edges() {
        if edge.is_self_edge() {
            continue;
        }
        let w = edge.weight.clone();
        let (u, v) = (edge.u, edge.v);
        m.set(u, u, m.get(u, u).clone() + w.clone());
        m.set(v, v, m.get(v, v).clone() + w.clone());
        m.set(u, v, m.get(u, v).clone() - w.clone());
        m.set(v, u, m.get(v, u).clone() - w);
    }
    m
}

/// `f64` Laplacian for the floating-point solver path.
pub fn laplacian_f64(g: &Graph) -> Matrix<f64> {
    let exact = laplacian(g);
    Matrix::from_fn(g.vertex_count(), |i, j| {
        exact.get(i, j).to_f64().expect("laplacian entry fits f64")
    })
}

fn assert_max_principle_rational(values: &[Rat], a: VertexId, b: VertexId) {
    let max = values.iter().max().expect("nonempty");
    let min = values.iter().min().expect("nonempty");
    let boundary = [&values[a], &values[b]];
    assert!(
        boundary.contains(&max) && boundary.contains(&min),
        "maximum principle violated: extrema not on the boundary pair"
    );
}

fn assert_max_principle_f64(values: &[f64], a: VertexId, b: VertexId) {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (1.0 + max.abs().max(min.abs()));
    let hi = values[a].max(values[b]);
    let lo = values[a].min(values[b]);
    assert!(
        max <= hi + tol && min >= lo - tol,
        "maximum principle violated: extrema not on the boundary pair"
    );
}

/// Solves the unit-current problem `excess(phi) = delta_x - delta_y` with
/// `phi(y) = 0`, by dropping y's row and column (the Laplacian's nullspace
/// is the constants, so the reduced system is invertible on a connected
/// graph).
pub fn unit_current_potential(g: &Graph, x: VertexId, y: VertexId) -> Result<Potential<Rat>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::SameVertex);
    }
    g.require_connected()?;
    let n = g.vertex_count();
    let lap = laplacian(g);
    let kept: Vec<VertexId> = (0..n).filter(|&v| v != y).collect();
    let reduced = Matrix::from_fn(kept.len(), |i, j| lap.get(kept[i], kept[j]).clone());
    let rhs: Vec<Rat> = kept
        .iter()
        .map(|&v| if v == x { rat_int(1) } else { Rat::zero() })
        .collect();
    let solution = solve_rational(&reduced, &rhs)?;
    let mut values = vec![Rat::zero(); n];
    for (slot, &v) in kept.iter().enumerate() {
        values[v] = solution[slot].clone();
    }
    assert_max_principle_rational(&values, x, y);
    Ok(Potential {
        values,
        reference: y,
    })
}

/// Floating-point variant of [`unit_current_potential`].
pub fn unit_current_potential_f64(g: &Graph, x: VertexId, y: VertexId) -> Result<Potential<f64>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::SameVertex);
    }
    g.require_connected()?;
    let n = g.vertex_count();
    let lap = laplacian_f64(g);
    let kept: Vec<VertexId> = (0..n).filter(|&v| v != y).collect();
    let reduced = Matrix::from_fn(kept.len(), |i, j| *lap.get(kept[i], kept[j]));
    let rhs: Vec<f64> = kept
        .iter()
        .map(|&v| if v == x { 1.0 } else { 0.0 })
        .collect();
    let solution = solve_f64(&reduced, &rhs)?;
    let mut values = vec![0.0; n];
    for (slot, &v) in kept.iter().enumerate() {
        values[v] = solution[slot];
    }
    assert_max_principle_f64(&values, x, y);
    Ok(Potential {
        values,
        reference: y,
    })
}

/// One-volt battery solution: h(a) = 1, h(b) = 0, harmonic elsewhere.
/// h(x) is the probability that the weighted walk from x hits a before b.
pub fn hitting_voltage(g: &Graph, a: VertexId, b: VertexId) -> Result<Potential<Rat>> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::SameVertex);
    }
    g.require_connected()?;
    let n = g.vertex_count();
    let lap = laplacian(g);
    let kept: Vec<VertexId> = (0..n).filter(|&v| v != a && v != b).collect();
    let reduced = Matrix::from_fn(kept.len(), |i, j| lap.get(kept[i], kept[j]).clone());
    // Move the fixed boundary h(a) = 1 to the right-hand side.
    let rhs: Vec<Rat> = kept.iter().map(|&v| -lap.get(v, a).clone()).collect();
    let solution = solve_rational(&reduced, &rhs)?;
    let mut values = vec![Rat::zero(); n];
    values[a] = rat_int(1);
    for (slot, &v) in kept.iter().enumerate() {
        values[v] = solution[slot].clone();
    }
    assert_max_principle_rational(&values, a, b);
    Ok(Potential {
        values,
        reference: b,
    })
}

/// Floating-point variant of [`hitting_voltage`].
pub fn hitting_voltage_f64(g: &Graph, a: VertexId, b: VertexId) -> Result<Potential<f64>> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::SameVertex);
    }
    g.require_connected()?;
    let n = g.vertex_count();
    let lap = laplacian_f64(g);
    let kept: Vec<VertexId> = (0..n).filter(|&v| v != a && v != b).collect();
    let reduced = Matrix::from_fn(kept.len(), |i, j| *lap.get(kept[i], kept[j]));
    let rhs: Vec<f64> = kept.iter().map(|&v| -lap.get(v, a)).collect();
    let solution = solve_f64(&reduced, &rhs)?;
    let mut values = vec![0.0; n];
    values[a] = 1.0;
    for (slot, &v) in kept.iter().enumerate() {
        values[v] = solution[slot];
    }
    assert_max_principle_f64(&values, a, b);
    Ok(Potential {
        values,
        reference: b,
    })
}

/// Effective resistance between a and b: the voltage needed to drive a unit
/// current from a to b.
pub fn effective_resistance(g: &Graph, a: VertexId, b: VertexId) -> Result<Rat> {
    let phi = unit_current_potential(g, a, b)?;
    Ok(phi.values[a].clone())
}

/// Floating-point variant of [`effective_resistance`].
pub fn effective_resistance_f64(g: &Graph, a: VertexId, b: VertexId) -> Result<f64> {
    let phi = unit_current_potential_f64(g, a, b)?;
    Ok(phi.values[a])
}

/// Expected number of visits to x by the walk from a before it first hits b:
/// `d(x) * phi_ab(x)`, zero at x = b.
pub fn expected_visits(g: &Graph, a: VertexId, b: VertexId, x: VertexId) -> Result<Rat> {
    g.check_vertex(x)?;
    let phi = unit_current_potential(g, a, b)?;
    Ok(g.degree(x) * phi.values[x].clone())
}

/// Unit-current potential on the n-torus between (0,0) and (1,0), by the
/// Fourier sum over the Laplacian's eigenfunctions `zeta^(ki+lj)` with
/// eigenvalues `4 - 2cos(2 pi k/n) - 2cos(2 pi l/n)`, normalized so the
/// value at (1,0) is zero. The imaginary part cancels in exact arithmetic
/// and is asserted below 1e-9 before being discarded.
pub fn torus_potential(n: usize, i: usize, j: usize) -> f64 {
    assert!(n >= 3, "torus potential needs n >= 3");
    assert!(i < n && j < n, "(i, j) must lie in [0, n)^2");
    torus_fourier_sum(n, i, j) - torus_fourier_sum(n, 1, 0)
}

/// Full n-by-n table of [`torus_potential`], indexed `[i][j]`.
pub fn torus_potential_table(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| torus_potential(n, i, j)).collect())
        .collect()
}

fn torus_fourier_sum(n: usize, i: usize, j: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let nf = n as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..n {
        for l in 0..n {
            if k == 0 && l == 0 {
                continue;
            }
            let theta_k = tau * k as f64 / nf;
            let theta_l = tau * l as f64 / nf;
            let lambda = 4.0 - 2.0 * theta_k.cos() - 2.0 * theta_l.cos();
            // The coefficient of the eigenfunction zeta^(ki+lj) in
            // delta_a - delta_b is (1 - conj(zeta)^k) / n^2, so each term
            // is (zeta^(ki+lj) - zeta^(ki+lj-k)) / lambda, as cos/sin pairs.
            let phase = tau * ((k * i + l * j) % n) as f64 / nf;
            re += (phase.cos() - (phase - theta_k).cos()) / lambda;
            im += (phase.sin() - (phase - theta_k).sin()) / lambda;
        }
    }
    let im = im / (nf * nf);
    assert!(
        im.abs() < 1e-9,
        "imaginary residue {im} exceeds tolerance in torus Fourier sum"
    );
    re / (nf * nf)
}

/// Coefficients a_0..a_(k-1) of a k-by-k circulant matrix
/// `M(i, j) = a((i - j) mod k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    pub coefficients: Vec<f64>,
}

/// Eigenvalues `lambda_j = sum_t a_t zeta^(jt)` of a circulant matrix, as
/// (re, im) pairs, for `zeta = e^(2 pi i / k)`.
pub fn circulant_eigenvalues(spec: &CirculantSpec) -> Vec<(f64, f64)> {
    let k = spec.coefficients.len();
    assert!(k >= 1, "circulant needs at least one coefficient");
    let tau = std::f64::consts::TAU;
    (0..k)
        .map(|j| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (t, a) in spec.coefficients.iter().enumerate() {
                let theta = tau * ((j * t) % k) as f64 / k as f64;
                re += a * theta.cos();
                im += a * theta.sin();
            }
            (re, im)
        })
        .collect()
}

/// Determinant of the circulant: the complex product of its eigenvalues,
/// asserted real to tolerance.
pub fn circulant_determinant(spec: &CirculantSpec) -> f64 {
    let mut re = 1.0;
    let mut im = 0.0;
    for (er, ei) in circulant_eigenvalues(spec) {
        let nre = re * er - im * ei;
        im = re * ei + im * er;
        re = nre;
    }
    assert!(
        im.abs() <= 1e-9 * (1.0 + re.abs()),
        "circulant determinant has imaginary residue {im}"
    );
    re
}

/// Excess vector of an arbitrary potential (used by invariant tests).
pub fn excess(g: &Graph, values: &[Rat]) -> Vec<Rat> {
    let lap = laplacian(g);
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            (0..n)
                .map(|y| lap.get(v, y).clone() * values[y].clone())
                .fold(Rat::zero(), |acc, t| acc + t)
        })
        .collect()
}

/// Verifies the torus solvers against each other; exposed for tests.
pub fn torus_fourier_matches_solver(n: usize, tolerance: f64) -> bool {
    let g = crate::graph::generate_family(crate::graph::Family::Torus, n).expect("torus");
    let phi =
        unit_current_potential_f64(&g, torus_vertex(n, 0, 0), torus_vertex(n, 1, 0)).expect("phi");
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let fourier = torus_potential(n, i, j);
            let solver = phi.values[torus_vertex(n, i, j)];
            worst = worst.max((fourier - solver).abs());
        }
    }
    worst < tolerance
}
