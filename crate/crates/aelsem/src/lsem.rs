//! Parameter sampling and covariance matrices for linear structural
//! equation models over a prime field.
//!
//! The covariance map is computed two independent ways: by matrix inversion
//! (the definition) and by trek-rule path enumeration (a combinatorial
//! expansion). The tests pin them against each other.

use crate::error::Result;
use crate::field::{FieldElement, PrimeModulus, RandomStream};
use crate::graph::MixedGraph;
use crate::linalg::Matrix;

/// Edge-weight assignment: `lambda[(t,h)]` on directed edges, `omega` symmetric
/// with support on the diagonal and the bidirected edges.
#[derive(Debug, Clone)]
pub struct Parameters {
    pub lambda: Matrix,
    pub omega: Matrix,
}

/// Draws all free parameters uniformly from the field. Draw order is fixed
/// (diagonal omega, then directed edges ascending, then bidirected edges
/// ascending) so a seed pins the whole assignment independent of call sites.
pub fn sample_params(g: &MixedGraph, p: PrimeModulus, rng: &mut RandomStream) -> Parameters {
    let n = g.n();
    let mut lambda = Matrix::zeros(n, n, p);
    let mut omega = Matrix::zeros(n, n, p);
    for v in 0..n {
        omega.set(v, v, p.sample_uniform(rng));
    }
    for (t, h) in g.directed_edges() {
        lambda.set(t, h, p.sample_uniform(rng));
    }
    for (v, w) in g.bidirected_edges() {
        let x = p.sample_uniform(rng);
        omega.set(v, w, x);
        omega.set(w, v, x);
    }
    Parameters { lambda, omega }
}

/// Covariance map: (I - Lambda)^{-T} Omega (I - Lambda)^{-1}.
/// Fails only if I - Lambda is singular, which cannot happen for acyclic graphs.
pub fn phi(params: &Parameters) -> Result<Matrix> {
    let n = params.lambda.rows();
    let p = params.lambda.modulus();
    let i_minus_lambda = Matrix::from_fn(n, n, p, |i, j| {
        if i == j {
            p.one() - params.lambda.get(i, j)
        } else {
            -params.lambda.get(i, j)
        }
    });
    let b = i_minus_lambda.inverse()?;
    Ok(Matrix::congruence(&b, &params.omega))
}

/// Sum over all directed paths from `from` to `to` of the product of edge
/// weights along the path; the empty path contributes 1 when `from == to`.
/// Exponential-time by design: this is the oracle, not the workhorse.
fn path_weight_sum(
    g: &MixedGraph,
    lambda: &Matrix,
    from: usize,
    to: usize,
) -> FieldElement {
    let p = lambda.modulus();
    if from == to {
        return p.one();
    }
    let mut total = p.zero();
    for c in g.children(from) {
        total = total + lambda.get(from, c) * path_weight_sum(g, lambda, c, to);
    }
    total
}

/// Covariance by the trek rule: sigma_vw sums, over all treks from v to w,
/// the product of the top weight (omega on the trek's source or bidirected
/// edge) and the weights on both directed sides.
pub fn sigma_via_trek_rule(g: &MixedGraph, params: &Parameters) -> Matrix {
    let n = g.n();
    let p = params.lambda.modulus();
    // f[a][b] = sum of directed-path weights a ~~> b
    let f = Matrix::from_fn(n, n, p, |a, b| path_weight_sum(g, &params.lambda, a, b));
    Matrix::from_fn(n, n, p, |v, w| {
        let mut s = p.zero();
        for c in 0..n {
            s = s + params.omega.get(c, c) * f.get(c, v) * f.get(c, w);
        }
        for (x, y) in g.bidirected_edges() {
            s = s + params.omega.get(x, y) * (f.get(x, v) * f.get(y, w) + f.get(y, v) * f.get(x, w));
        }
        s
    })
}
