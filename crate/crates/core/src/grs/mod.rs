//! (Extended) generalized Reed-Solomon codes.
//!
//! A code `GRS_k(A, v)` is generated by the columns `v_j c_k(a_j)` where
//! `c_k(a) = (1, a, .., a^{k-1})^T` for finite `a` and `c_k(inf) = e_k`.

mod verify;

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

pub use verify::{
    gram, is_self_dual, mds_check, min_distance, min_distance_bruteforce,
    min_distance_by_zero_sets, DistanceMethod, MdsMode, MdsOptions, MdsReport, SelfDualFailure,
    SelfDualVerdict, DEFAULT_CODEWORD_BOUND, DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_SAMPLES,
};

/// A point of the projective line `F_q ∪ {inf}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvaluationPoint {
    Finite(Elem),
    Infinity,
}

impl EvaluationPoint {
    pub fn finite(self) -> Option<Elem> {
        match self {
            EvaluationPoint::Finite(e) => Some(e),
            EvaluationPoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, EvaluationPoint::Infinity)
    }
}

impl From<Elem> for EvaluationPoint {
    fn from(e: Elem) -> Self {
        EvaluationPoint::Finite(e)
    }
}

/// Ordered, duplicate-free evaluation points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationSet {
    points: Vec<EvaluationPoint>,
}

impl EvaluationSet {
    pub fn new(field: &Field, points: Vec<EvaluationPoint>) -> Result<Self> {
        let n = points.len();
        if n == 0 || n as u64 > field.q() + 1 {
            return Err(Error::BadSetSize {
                n,
                max: field.q() + 1,
            });
        }
        for p in &points {
            if let EvaluationPoint::Finite(e) = p {
                field.check(*e)?;
            }
        }
        let distinct: HashSet<_> = points.iter().collect();
        if distinct.len() != n {
            return Err(Error::DuplicatePoints);
        }
        Ok(EvaluationSet { points })
    }

    /// An all-finite set.
    pub fn finite(field: &Field, points: Vec<Elem>) -> Result<Self> {
        Self::new(field, points.into_iter().map(EvaluationPoint::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[EvaluationPoint] {
        &self.points
    }

    pub fn contains(&self, p: EvaluationPoint) -> bool {
        self.points.contains(&p)
    }

    pub fn has_infinity(&self) -> bool {
        self.points.iter().any(|p| p.is_infinity())
    }

    /// The points as field elements; fails if infinity is present.
    pub fn finite_points(&self) -> Result<Vec<Elem>> {
        self.points
            .iter()
            .map(|p| p.finite().ok_or(Error::InfinityInSet))
            .collect()
    }

    /// This set with infinity appended.
    pub fn with_infinity(&self, field: &Field) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.push(EvaluationPoint::Infinity);
        Self::new(field, pts)
    }
}

/// Nonzero multipliers aligned with an evaluation set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingVector(Vec<Elem>);

impl ScalingVector {
    pub fn new(field: &Field, entries: Vec<Elem>) -> Result<Self> {
        for (i, &e) in entries.iter().enumerate() {
            field.check(e)?;
            if e.is_zero() {
                return Err(Error::ZeroScaling(i));
            }
        }
        Ok(ScalingVector(entries))
    }

    pub fn ones(field: &Field, n: usize) -> Self {
        ScalingVector(vec![field.one(); n])
    }

    pub fn entries(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `c_k(point)`.
pub fn eval_column(field: &Field, k: usize, point: EvaluationPoint) -> Vec<Elem> {
    match point {
        EvaluationPoint::Finite(a) => {
            let mut col = Vec::with_capacity(k);
            let mut x = field.one();
            for _ in 0..k {
                col.push(x);
                x = field.mul(x, a);
            }
            col
        }
        EvaluationPoint::Infinity => {
            let mut col = vec![field.zero(); k];
            if k > 0 {
                col[k - 1] = field.one();
            }
            col
        }
    }
}

fn assemble(field: &Field, k: usize, points: &EvaluationSet, scaling: &ScalingVector) -> Matrix {
    let n = points.len();
    let mut g = Matrix::zeros(field, k, n);
    for (j, (&pt, &v)) in points.points().iter().zip(scaling.entries()).enumerate() {
        for (i, c) in eval_column(field, k, pt).into_iter().enumerate() {
            g[(i, j)] = field.mul(v, c);
        }
    }
    g
}

/// A generalized Reed-Solomon code with its generator matrix.
#[derive(Clone, Debug)]
pub struct GrsCode {
    field: Field,
    k: usize,
    points: EvaluationSet,
    scaling: ScalingVector,
    generator: Matrix,
    provenance: Value,
}

impl GrsCode {
    /// Assembles `GRS_k(points, scaling)` and checks the generator has rank k.
    pub fn new(
        field: &Field,
        k: usize,
        points: EvaluationSet,
        scaling: ScalingVector,
        provenance: Value,
    ) -> Result<Self> {
        let n = points.len();
        if scaling.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: scaling.len(),
            });
        }
        if k == 0 || k > n {
            return Err(Error::BadDimension { k, n });
        }
        for &v in scaling.entries() {
            field.check(v)?;
        }
        let generator = assemble(field, k, &points, &scaling);
        let rank = linalg::rank(field, &generator);
        if rank != k {
            return Err(Error::InternalVerificationFailed(format!(
                "generator rank {rank} != {k}"
            )));
        }
        Ok(GrsCode {
            field: field.clone(),
            k,
            points,
            scaling,
            generator,
            provenance,
        })
    }

    /// Takes the generator as given (e.g. read from a file). Use
    /// [`GrsCode::generator_consistent`] to compare it with the one implied
    /// by the points and scaling.
    pub fn with_generator(
        field: &Field,
        k: usize,
        points: EvaluationSet,
        scaling: ScalingVector,
        generator: Matrix,
        provenance: Value,
    ) -> Result<Self> {
        let n = points.len();
        if scaling.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: scaling.len(),
            });
        }
        if k == 0 || k > n {
            return Err(Error::BadDimension { k, n });
        }
        if generator.rows() != k || generator.cols() != n {
            return Err(Error::LengthMismatch {
                expected: k * n,
                got: generator.rows() * generator.cols(),
            });
        }
        Ok(GrsCode {
            field: field.clone(),
            k,
            points,
            scaling,
            generator,
            provenance,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &EvaluationSet {
        &self.points
    }

    pub fn scaling(&self) -> &ScalingVector {
        &self.scaling
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn provenance(&self) -> &Value {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Value) {
        self.provenance = provenance;
    }

    /// Whether the stored generator equals the one built from points and
    /// scaling.
    pub fn generator_consistent(&self) -> bool {
        assemble(&self.field, self.k, &self.points, &self.scaling) == self.generator
    }
}

/// Shorthand for [`GrsCode::new`] with a "manual" provenance.
pub fn make_code(
    field: &Field,
    k: usize,
    points: EvaluationSet,
    scaling: ScalingVector,
) -> Result<GrsCode> {
    GrsCode::new(field, k, points, scaling, json!({ "kind": "manual" }))
}

/// `pi_A(x) = prod_{a in A} (x - a)`.
pub fn pi_eval(field: &Field, set: &EvaluationSet, x: Elem) -> Result<Elem> {
    let a = set.finite_points()?;
    Ok(pi_eval_slice(field, &a, x))
}

pub(crate) fn pi_eval_slice(field: &Field, set: &[Elem], x: Elem) -> Elem {
    field.product(set.iter().map(|&a| field.sub(x, a)))
}

/// `delta_A(a) = prod_{a' in A, a' != a} (a - a')`.
pub fn delta(field: &Field, set: &EvaluationSet, a: Elem) -> Result<Elem> {
    let pts = set.finite_points()?;
    if !pts.contains(&a) {
        return Err(Error::NotAMember);
    }
    Ok(delta_slice(field, &pts, a))
}

pub(crate) fn delta_slice(field: &Field, set: &[Elem], a: Elem) -> Elem {
    field.product(set.iter().filter(|&&b| b != a).map(|&b| field.sub(a, b)))
}

/// `delta_A(a_i)` for every point, in set order.
pub fn deltas(field: &Field, set: &EvaluationSet) -> Result<Vec<Elem>> {
    let pts = set.finite_points()?;
    Ok(pts.iter().map(|&a| delta_slice(field, &pts, a)).collect())
}

/// Coefficients of `pi_A`, constant term first.
pub fn pi_poly(field: &Field, set: &[Elem]) -> Vec<Elem> {
    let mut poly = vec![field.one()];
    for &a in set {
        let mut next = vec![field.zero(); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], c);
            next[i] = field.sub(next[i], field.mul(a, c));
        }
        poly = next;
    }
    poly
}

/// Formal derivative of a coefficient vector.
pub fn poly_derivative(field: &Field, poly: &[Elem]) -> Vec<Elem> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
        .collect()
}

/// Horner evaluation.
pub fn poly_eval(field: &Field, poly: &[Elem], x: Elem) -> Elem {
    poly.iter()
        .rev()
        .fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c))
}

/// Scaling `u` with `u_i = (v_i delta_A(a_i))^{-1}`, so that
/// `GRS_{n-k}(A, u)` is orthogonal to the input. The orthogonality is
/// checked before returning.
pub fn dual_scaling(code: &GrsCode) -> Result<ScalingVector> {
    if code.points.has_infinity() {
        return Err(Error::InfinityUnsupported);
    }
    let f = &code.field;
    let ds = deltas(f, &code.points)?;
    let u = code
        .scaling
        .entries()
        .iter()
        .zip(&ds)
        .map(|(&v, &d)| f.inv(f.mul(v, d)))
        .collect::<Result<Vec<_>>>()?;
    let u = ScalingVector::new(f, u)?;
    let dual_k = code.n() - code.k;
    if dual_k > 0 {
        let h = assemble(f, dual_k, &code.points, &u);
        let cross = code.generator.mul(f, &h.transpose());
        if !cross.is_zero() {
            return Err(Error::InternalVerificationFailed(
                "dual generator not orthogonal".into(),
            ));
        }
    }
    Ok(u)
}

/// `message * G`.
pub fn encode(code: &GrsCode, message: &[Elem]) -> Result<Vec<Elem>> {
    if message.len() != code.k {
        return Err(Error::LengthMismatch {
            expected: code.k,
            got: message.len(),
        });
    }
    for &m in message {
        code.field.check(m)?;
    }
    Ok(code.generator.left_mul_vec(&code.field, message))
}

/// Recovers the message from a word with erasures (`None`). Any k
/// independent unerased columns determine it; every other unerased
/// position must agree.
pub fn erasure_decode(code: &GrsCode, received: &[Option<Elem>]) -> Result<Vec<Elem>> {
    let f = &code.field;
    if received.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: received.len(),
        });
    }
    let known: Vec<usize> = (0..received.len())
        .filter(|&i| received[i].is_some())
        .collect();
    if known.len() < code.k {
        return Err(Error::TooManyErasures {
            available: known.len(),
            needed: code.k,
        });
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(code.k);
    for &j in &known {
        chosen.push(j);
        if linalg::rank_of_columns(f, &code.generator, &chosen) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == code.k {
            break;
        }
    }
    if chosen.len() < code.k {
        return Err(Error::TooManyErasures {
            available: chosen.len(),
            needed: code.k,
        });
    }
    // m G_S = y_S  <=>  G_S^T m^T = y_S^T
    let system = code.generator.select_columns(&chosen).transpose();
    let rhs: Vec<Elem> = chosen
        .iter()
        .map(|&j| f.check(received[j].unwrap()))
        .collect::<Result<_>>()?;
    let message = linalg::solve(f, &system, &rhs).ok_or(Error::InconsistentWord)?;
    let word = code.generator.left_mul_vec(f, &message);
    if known.iter().any(|&j| Some(word[j]) != received[j]) {
        return Err(Error::InconsistentWord);
    }
    Ok(message)
}
