//! The three randomized decision procedures and their error bounds:
//! constraint testing, model inclusion via division-free half-trek
//! identification, and algebraic equivalence of BAPs. All verdicts are
//! one-sided: `false` is certain, `true` carries a Schwartz-Zippel bound.

use crate::constraint::Constraint;
use crate::error::{Error, Result};
use crate::field::{derive_stream, stream_from_seed, PrimeModulus, RandomStream};
use crate::graph::MixedGraph;
use crate::linalg::{all_column_deleted_minors, Matrix};
use crate::lsem::{phi, sample_params};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Exact rational error bound; never reduced, so repeated runs keep a
/// denominator of p^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    num: BigUint,
    den: BigUint,
}

impl Bound {
    pub fn new(num: BigUint, den: BigUint) -> Bound {
        assert!(!den.is_zero(), "bound denominator must be nonzero");
        Bound { num, den }
    }

    pub fn zero() -> Bound {
        Bound { num: BigUint::zero(), den: BigUint::one() }
    }

    pub fn one() -> Bound {
        Bound { num: BigUint::one(), den: BigUint::one() }
    }

    pub fn from_ratio(num: u128, den: u128) -> Bound {
        Bound::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn at_least_one(&self) -> bool {
        self.num >= self.den
    }

    pub fn pow(&self, k: u32) -> Bound {
        Bound { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Equality as rationals, ignoring representation.
    pub fn same_value(&self, other: &Bound) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Decimal rendering to three significant figures, e.g. "0.287" or
    /// "4.61e-8".
    pub fn decimal_string(&self) -> String {
        if self.num.is_zero() {
            return "0".to_string();
        }
        let ten = BigUint::from(10u32);
        let mut n = self.num.clone();
        let mut d = self.den.clone();
        let mut e: i64 = 0;
        while n < d {
            n *= &ten;
            e -= 1;
        }
        while n >= &d * &ten {
            d *= &ten;
            e += 1;
        }
        // round(100 * n / d), with n/d in [1, 10)
        let mut digits = (&n * 200u32 + &d) / (&d * 2u32);
        if digits == BigUint::from(1000u32) {
            digits = BigUint::from(100u32);
            e += 1;
        }
        let s = digits.to_string();
        debug_assert_eq!(s.len(), 3);
        if (-3..3).contains(&e) {
            if e >= 0 {
                let split = (e + 1) as usize;
                if split >= 3 {
                    s
                } else {
                    format!("{}.{}", &s[..split], &s[split..])
                }
            } else {
                format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
            }
        } else {
            format!("{}.{}e{}", &s[..1], &s[1..], e)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// A nonadjacent pair whose identified omega entry was nonzero, on a
    /// false verdict.
    pub witness_pair: Option<(usize, usize)>,
    /// Whether any pivot determinant |A| evaluated to zero during solving.
    pub singular_pivot_seen: bool,
    /// The seed the run was keyed on.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    /// true = evidence for the property; false = certain refutation.
    pub verdict: bool,
    pub error_bound: Bound,
    pub repeats_used: usize,
    pub diagnostics: Diagnostics,
}

/// Per-node degree bounds a_v from the identification recursion; a_v = 0
/// exactly when solve was never called on v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AVector {
    pub values: Vec<BigUint>,
    pub solved: Vec<bool>,
}

fn require_acyclic(g: &MixedGraph) -> Result<()> {
    g.topological_order().map(|_| ())
}

fn require_bap(g: &MixedGraph) -> Result<()> {
    let report = g.classify();
    if !report.acyclic {
        Err(Error::NotBap("graph has a directed cycle"))
    } else if !report.bow_free {
        Err(Error::NotBap("graph has a bow (directed and bidirected edge on one pair)"))
    } else {
        Ok(())
    }
}

/// Single Schwartz-Zippel trial of "G imposes the constraint f".
pub fn decide_constraint(
    g: &MixedGraph,
    f: &Constraint,
    p: PrimeModulus,
    seed: u64,
) -> Result<Decision> {
    let mut rng = stream_from_seed(seed);
    decide_constraint_stream(g, f, p, &mut rng, seed)
}

pub fn decide_constraint_stream(
    g: &MixedGraph,
    f: &Constraint,
    p: PrimeModulus,
    rng: &mut RandomStream,
    seed: u64,
) -> Result<Decision> {
    require_acyclic(g)?;
    let params = sample_params(g, p, rng);
    let sigma = phi(&params)?;
    let verdict = f.evaluate(&sigma)?.is_zero();
    let error_bound = if verdict { error_bound_constraint(g, f, p)? } else { Bound::zero() };
    Ok(Decision {
        verdict,
        error_bound,
        repeats_used: 1,
        diagnostics: Diagnostics { seed, ..Diagnostics::default() },
    })
}

/// (2 * longest-directed-path + 1) * deg(f) / p.
pub fn error_bound_constraint(g: &MixedGraph, f: &Constraint, p: PrimeModulus) -> Result<Bound> {
    let ell = g.longest_directed_path()?;
    let num = BigUint::from(2 * ell + 1) * BigUint::from(f.degree());
    Ok(Bound::new(num, BigUint::from(p.value())))
}

pub struct SolveState {
    pub lambda_tilde: Matrix,
    pub solved: Vec<bool>,
    pub singular_pivot_seen: bool,
}

impl SolveState {
    pub fn new(n: usize, p: PrimeModulus) -> SolveState {
        SolveState {
            lambda_tilde: Matrix::identity(n, p),
            solved: vec![false; n],
            singular_pivot_seen: false,
        }
    }
}

/// Division-free identification step for column v of LambdaTilde.
/// Memoized; recursion terminates because parents precede v topologically.
pub fn solve_column(gp: &MixedGraph, sigma: &Matrix, v: usize, state: &mut SolveState) {
    if state.solved[v] {
        return;
    }
    state.solved[v] = true;
    let pa = gp.parents(v);
    if pa.is_empty() {
        return;
    }
    let htr = gp.half_trek_reachable(v);
    for &w in &pa {
        if htr.contains(&w) {
            solve_column(gp, sigma, w, state);
        }
    }
    let n = gp.n();
    let k = pa.len();
    let p = sigma.modulus();
    // row per parent: LambdaTilde column w transposed if w is half-trek
    // reachable from v, otherwise the identity row
    let m = Matrix::from_fn(k, n, p, |t, j| {
        let w = pa[t];
        if htr.contains(&w) {
            state.lambda_tilde.get(j, w)
        } else if j == w {
            p.one()
        } else {
            p.zero()
        }
    });
    // [A | b] with A = M Sigma_{.,pa} and b = M Sigma_{.,v}
    let cols: Vec<usize> = pa.iter().copied().chain(std::iter::once(v)).collect();
    let ab = m.mul(&Matrix::from_fn(n, k + 1, p, |i, j| sigma.get(i, cols[j])));
    let minors = all_column_deleted_minors(&ab);
    let det_a = minors[k];
    if det_a.is_zero() {
        state.singular_pivot_seen = true;
    }
    state.lambda_tilde.set(v, v, det_a);
    for (t, &w) in pa.iter().enumerate() {
        // Cramer: det(A with column t replaced by b) = (-1)^(k-1-t) * minors[t]
        let cramer = if (k - 1 - t).is_multiple_of(2) { minors[t] } else { -minors[t] };
        state.lambda_tilde.set(w, v, -cramer);
    }
}

/// Single trial of "the model of G is contained in the model of Gp".
pub fn decide_inclusion(
    g: &MixedGraph,
    gp: &MixedGraph,
    p: PrimeModulus,
    seed: u64,
) -> Result<Decision> {
    let mut rng = stream_from_seed(seed);
    decide_inclusion_stream(g, gp, p, &mut rng, seed)
}

pub fn decide_inclusion_stream(
    g: &MixedGraph,
    gp: &MixedGraph,
    p: PrimeModulus,
    rng: &mut RandomStream,
    seed: u64,
) -> Result<Decision> {
    require_acyclic(g)?;
    require_bap(gp)?;
    if g.n() != gp.n() {
        return Err(Error::NodeCountMismatch(g.n(), gp.n()));
    }
    let n = g.n();
    let params = sample_params(g, p, rng);
    let sigma = phi(&params)?;
    let mut state = SolveState::new(n, p);
    for v in 0..n {
        if gp.degree(v) < n - 1 {
            solve_column(gp, &sigma, v, &mut state);
        }
    }
    let omega_tilde = Matrix::congruence(&state.lambda_tilde, &sigma);
    let mut witness_pair = None;
    for (v, w) in gp.nonadjacent_pairs() {
        if !omega_tilde.get(v, w).is_zero() {
            witness_pair = Some((v, w));
            break;
        }
    }
    let verdict = witness_pair.is_none();
    let error_bound = if verdict { error_bound_inclusion(g, gp, p)? } else { Bound::zero() };
    Ok(Decision {
        verdict,
        error_bound,
        repeats_used: 1,
        diagnostics: Diagnostics {
            witness_pair,
            singular_pivot_seen: state.singular_pivot_seen,
            seed,
        },
    })
}

/// Replays the identification call pattern and computes the degree recursion
/// a_v = |pa(v)| + sum of a_w over parents w half-trek reachable from v.
pub fn a_values(gp: &MixedGraph) -> Result<AVector> {
    require_bap(gp)?;
    let n = gp.n();
    let mut values = vec![BigUint::zero(); n];
    let mut solved = vec![false; n];
    fn go(gp: &MixedGraph, v: usize, values: &mut [BigUint], solved: &mut [bool]) {
        if solved[v] {
            return;
        }
        solved[v] = true;
        let pa = gp.parents(v);
        if pa.is_empty() {
            return;
        }
        let htr: BTreeSet<usize> = gp.half_trek_reachable(v);
        let mut a = BigUint::from(pa.len());
        for &w in &pa {
            if htr.contains(&w) {
                go(gp, w, values, solved);
                a += &values[w];
            }
        }
        values[v] = a;
    }
    for v in 0..n {
        if gp.degree(v) < n - 1 {
            go(gp, v, &mut values, &mut solved);
        }
    }
    Ok(AVector { values, solved })
}

/// (2 * longest-path(G) + 1) * (1 + max over nonadjacent pairs of Gp of
/// a_v + a_w) / p; exactly 0 when Gp is complete (nothing is checked).
pub fn error_bound_inclusion(g: &MixedGraph, gp: &MixedGraph, p: PrimeModulus) -> Result<Bound> {
    require_bap(gp)?;
    if g.n() != gp.n() {
        return Err(Error::NodeCountMismatch(g.n(), gp.n()));
    }
    let ell = g.longest_directed_path()?;
    let pairs = gp.nonadjacent_pairs();
    if pairs.is_empty() {
        return Ok(Bound::zero());
    }
    let a = a_values(gp)?;
    let max_sum = pairs
        .iter()
        .map(|&(v, w)| &a.values[v] + &a.values[w])
        .max()
        .unwrap();
    let num = BigUint::from(2 * ell + 1) * (BigUint::one() + max_sum);
    Ok(Bound::new(num, BigUint::from(p.value())))
}

/// Graph-independent bound (2n - 1)(3 * 2^n / 8 - 1) / p, valid for n >= 4.
pub fn error_bound_generic(n: usize, p: PrimeModulus) -> Result<Bound> {
    if n < 4 {
        return Err(Error::NTooSmall(n));
    }
    let factor = BigUint::from(3u32) * (BigUint::one() << (n - 3)) - BigUint::one();
    let num = BigUint::from(2 * n - 1) * factor;
    Ok(Bound::new(num, BigUint::from(p.value())))
}

/// Single trial of "G and Gp are algebraically equivalent". Skeleton
/// mismatch refutes with certainty and no field work; otherwise one
/// inclusion direction suffices because equal edge counts give the two
/// models the same dimension.
pub fn decide_equivalence(
    g: &MixedGraph,
    gp: &MixedGraph,
    p: PrimeModulus,
    seed: u64,
) -> Result<Decision> {
    let mut rng = stream_from_seed(seed);
    decide_equivalence_stream(g, gp, p, &mut rng, seed)
}

pub fn decide_equivalence_stream(
    g: &MixedGraph,
    gp: &MixedGraph,
    p: PrimeModulus,
    rng: &mut RandomStream,
    seed: u64,
) -> Result<Decision> {
    require_bap(g)?;
    require_bap(gp)?;
    if g.n() != gp.n() {
        return Err(Error::NodeCountMismatch(g.n(), gp.n()));
    }
    if g.skeleton() != gp.skeleton() {
        return Ok(Decision {
            verdict: false,
            error_bound: Bound::zero(),
            repeats_used: 1,
            diagnostics: Diagnostics { seed, ..Diagnostics::default() },
        });
    }
    decide_inclusion_stream(g, gp, p, rng, seed)
}

/// Runs the task on k streams derived from the master seed, stopping at the
/// first (certain) false. After k true verdicts the reported bound is the
/// single-run bound to the k-th power, clamped to 1 if the single-run bound
/// was already >= 1.
pub fn decide_with_repeats(
    k: usize,
    master_seed: u64,
    task: impl Fn(&mut RandomStream) -> Result<Decision>,
) -> Result<Decision> {
    assert!(k >= 1, "repetition count must be positive");
    let mut last = None;
    for i in 0..k {
        let mut rng = derive_stream(master_seed, i as u64);
        let mut d = task(&mut rng)?;
        d.diagnostics.seed = master_seed;
        d.repeats_used = i + 1;
        if !d.verdict {
            d.error_bound = Bound::zero();
            return Ok(d);
        }
        last = Some(d);
    }
    let mut d = last.unwrap();
    d.error_bound = if d.error_bound.at_least_one() {
        Bound::one()
    } else {
        d.error_bound.pow(k as u32)
    };
    Ok(d)
}
