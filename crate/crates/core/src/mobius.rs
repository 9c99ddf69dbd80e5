//! The action `t -> (c + d t)/(a + b t)` of invertible 2x2 matrices on
//! `F_q ∪ {inf}`, the induced `k x k` matrices, and transport of self-dual
//! GRS codes along it.
//!
//! For `g = ((a, b), (c, d))` and `c_k(t) = (1, t, ..., t^{k-1})`,
//! `g_k c_k(t) = delta(t) c_k(g(t))`, so `g_k G = G' ` where `G'` has points
//! `g(a_i)` and scalings `delta_i v_i`. The two codes are therefore equal.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::grs::{eval_column, is_self_dual, EvaluationPoint, EvaluationSet, GrsCode, ScalingVector};
use crate::linalg::{rank, Matrix};

/// Largest `q` for which the full projective line is materialized.
pub const FULL_LINE_LIMIT: u64 = 1 << 16;

/// An invertible `((a, b), (c, d))`.
///
/// The representative passed in is kept as-is so that the induced matrices
/// compose exactly; equality is by projective class.
#[derive(Clone, Copy, Debug)]
pub struct MobiusTransform {
    raw: [Elem; 4],
    canon: [Elem; 4],
}

impl PartialEq for MobiusTransform {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for MobiusTransform {}

impl MobiusTransform {
    pub fn new(field: &Field, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self> {
        for e in [a, b, c, d] {
            field.check(e)?;
        }
        if field.sub(field.mul(a, d), field.mul(b, c)).is_zero() {
            return Err(Error::SingularTransform);
        }
        let raw = [a, b, c, d];
        let lead = *raw.iter().find(|e| !e.is_zero()).expect("nonzero determinant");
        let s = field.inv(lead)?;
        let canon = raw.map(|e| field.mul(s, e));
        Ok(MobiusTransform { raw, canon })
    }

    pub fn identity(field: &Field) -> Self {
        Self::new(field, field.one(), field.zero(), field.zero(), field.one())
            .expect("identity is invertible")
    }

    /// Uniform over invertible matrices.
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Self {
        let q = field.q() as u32;
        loop {
            let mut e = || field.from_raw(rng.random_range(0..q)).expect("in range");
            if let Ok(g) = Self::new(field, e(), e(), e(), e()) {
                return g;
            }
        }
    }

    /// `[a, b, c, d]` as given.
    pub fn coefficients(&self) -> [Elem; 4] {
        self.raw
    }

    /// `[a, b, c, d]` with the first nonzero entry scaled to 1.
    pub fn canonical(&self) -> [Elem; 4] {
        self.canon
    }

    pub fn canonicalized(&self) -> Self {
        MobiusTransform {
            raw: self.canon,
            canon: self.canon,
        }
    }

    /// Matrix product `self * other`, so that `(gh)(t) = g(h(t))`.
    pub fn compose(&self, field: &Field, other: &Self) -> Self {
        let [a, b, c, d] = self.raw;
        let [e, f, g, h] = other.raw;
        let dot = |x, y, z, w| field.add(field.mul(x, y), field.mul(z, w));
        Self::new(field, dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h))
            .expect("product of invertible matrices")
    }

    pub fn inverse(&self, field: &Field) -> Self {
        let [a, b, c, d] = self.raw;
        Self::new(field, d, field.neg(b), field.neg(c), a).expect("adjugate of invertible matrix")
    }
}

pub fn apply(field: &Field, g: &MobiusTransform, t: EvaluationPoint) -> EvaluationPoint {
    let [a, b, c, d] = g.raw;
    match t {
        EvaluationPoint::Infinity if b.is_zero() => EvaluationPoint::Infinity,
        EvaluationPoint::Infinity => EvaluationPoint::Finite(field.div(d, b).expect("b != 0")),
        EvaluationPoint::Finite(t) => {
            let den = field.add(a, field.mul(b, t));
            match field.div(field.add(c, field.mul(d, t)), den) {
                Ok(x) => EvaluationPoint::Finite(x),
                Err(_) => EvaluationPoint::Infinity,
            }
        }
    }
}

fn poly_mul(field: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let mut out = vec![field.zero(); x.len() + y.len() - 1];
    for (i, &u) in x.iter().enumerate() {
        for (j, &v) in y.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(u, v));
        }
    }
    out
}

fn poly_pow(field: &Field, base: &[Elem], e: usize) -> Vec<Elem> {
    (0..e).fold(vec![field.one()], |acc, _| poly_mul(field, &acc, base))
}

/// `g_k`: row `i` holds the coefficients of `(a + bX)^{k-i} (c + dX)^{i-1}`.
pub fn induced_matrix(field: &Field, g: &MobiusTransform, k: usize) -> Result<Matrix> {
    if k == 0 || k as u64 > field.q() {
        return Err(Error::BadDimension { k, n: field.q() as usize });
    }
    let [a, b, c, d] = g.raw;
    let rows = (1..=k)
        .map(|i| {
            let p = poly_mul(field, &poly_pow(field, &[a, b], k - i), &poly_pow(field, &[c, d], i - 1));
            p[..k].to_vec()
        })
        .collect();
    let m = Matrix::from_rows(rows);
    if rank(field, &m) != k {
        return Err(Error::InternalVerificationFailed("induced matrix is singular".into()));
    }
    Ok(m)
}

/// The multiplier with `g_k c_k(t) = delta * c_k(g(t))`.
pub fn point_multiplier(field: &Field, g: &MobiusTransform, k: usize, t: EvaluationPoint) -> Elem {
    let [a, b, c, d] = g.raw;
    let e = k.saturating_sub(1) as u64;
    let base = match t {
        EvaluationPoint::Finite(x) => {
            let den = field.add(a, field.mul(b, x));
            if den.is_zero() {
                // t = -a/b
                field.sub(c, field.mul(d, field.div(a, b).expect("b != 0 here")))
            } else {
                den
            }
        }
        EvaluationPoint::Infinity if b.is_zero() => d,
        EvaluationPoint::Infinity => b,
    };
    field.pow_u(base, e)
}

pub fn delta_diagonal(
    field: &Field,
    g: &MobiusTransform,
    k: usize,
    points: &EvaluationSet,
) -> Vec<Elem> {
    points
        .points()
        .iter()
        .map(|&t| point_multiplier(field, g, k, t))
        .collect()
}

/// `GRS_k(A, v) = GRS_k(gA, delta v)` with both sides.
#[derive(Clone, Debug)]
pub struct TransportCertificate {
    pub original: GrsCode,
    pub transform: MobiusTransform,
    pub transported: GrsCode,
    pub multipliers: Vec<Elem>,
}

fn elem_json(field: &Field, e: Elem) -> Value {
    json!(field.coeffs(e))
}

pub fn transform_json(field: &Field, g: &MobiusTransform) -> Value {
    let [a, b, c, d] = g.canonical();
    json!({
        "a": elem_json(field, a),
        "b": elem_json(field, b),
        "c": elem_json(field, c),
        "d": elem_json(field, d),
    })
}

/// `rank([G; G']) = k`.
pub fn same_row_space(field: &Field, x: &Matrix, y: &Matrix) -> bool {
    let r = rank(field, x);
    x.cols() == y.cols() && r == rank(field, y) && rank(field, &x.vstack(y)) == r
}

fn transport_with(code: &GrsCode, g: &MobiusTransform, provenance: Value) -> Result<TransportCertificate> {
    let field = code.field();
    if !is_self_dual(code).self_dual {
        return Err(Error::NotSelfDual);
    }
    let k = code.k();
    let pts = code
        .points()
        .points()
        .iter()
        .map(|&t| apply(field, g, t))
        .collect();
    let pts = EvaluationSet::new(field, pts)?;
    let multipliers = delta_diagonal(field, g, k, code.points());
    let v = multipliers
        .iter()
        .zip(code.scaling().entries())
        .map(|(&m, &v)| field.mul(m, v))
        .collect();
    let transported = GrsCode::new(field, k, pts, ScalingVector::new(field, v)?, provenance)?;
    if !is_self_dual(&transported).self_dual {
        return Err(Error::InternalVerificationFailed("transported code is not self-dual".into()));
    }
    if !same_row_space(field, code.generator(), transported.generator()) {
        return Err(Error::InternalVerificationFailed("row spaces differ".into()));
    }
    Ok(TransportCertificate {
        original: code.clone(),
        transform: *g,
        transported,
        multipliers,
    })
}

/// Moves a self-dual code to the evaluation set `gA`.
pub fn transport(code: &GrsCode, g: &MobiusTransform) -> Result<TransportCertificate> {
    let provenance = json!({
        "kind": "mobius",
        "transform": transform_json(code.field(), g),
        "parent": code.provenance(),
    });
    transport_with(code, g, provenance)
}

/// Transports by `g = ((a, 1), (1, 0))` with `a` the first field element in
/// enumeration order such that `-a` is not an evaluation point.
pub fn remove_infinity(code: &GrsCode) -> Result<TransportCertificate> {
    let field = code.field();
    if !code.points().has_infinity() {
        return Err(Error::NoInfinity);
    }
    if code.n() as u64 == field.q() + 1 {
        return Err(Error::FullProjectiveLine);
    }
    let a = field
        .elements()
        .find(|&a| !code.points().contains(EvaluationPoint::Finite(field.neg(a))))
        .expect("some finite point is free");
    let g = MobiusTransform::new(field, a, field.one(), field.one(), field.zero())?;
    let provenance = json!({
        "kind": "remove_infinity",
        "a": elem_json(field, a),
        "transform": transform_json(field, &g),
        "parent": code.provenance(),
    });
    transport_with(code, &g, provenance)
}

/// `F_q` in enumeration order followed by `inf`.
pub fn projective_line(field: &Field) -> Result<Vec<EvaluationPoint>> {
    if field.q() > FULL_LINE_LIMIT {
        return Err(Error::FieldTooLarge {
            q: field.q(),
            bound: FULL_LINE_LIMIT,
        });
    }
    let mut line: Vec<_> = field.elements().map(EvaluationPoint::Finite).collect();
    line.push(EvaluationPoint::Infinity);
    Ok(line)
}

fn line_index(field: &Field, t: EvaluationPoint) -> usize {
    match t {
        EvaluationPoint::Finite(x) => x.raw() as usize,
        EvaluationPoint::Infinity => field.q() as usize,
    }
}

/// `Pi(g)` with `(G_k Pi)` column `j` equal to column `g(t_j)` of `G_k`.
pub fn permutation_matrix(field: &Field, g: &MobiusTransform) -> Result<Matrix> {
    let line = projective_line(field)?;
    let mut m = Matrix::zeros(field, line.len(), line.len());
    for (j, &t) in line.iter().enumerate() {
        m[(line_index(field, apply(field, g, t)), j)] = field.one();
    }
    Ok(m)
}

/// `G_k` over the whole projective line.
pub fn full_generator(field: &Field, k: usize) -> Result<Matrix> {
    let line = projective_line(field)?;
    let cols: Vec<Vec<Elem>> = line.iter().map(|&t| eval_column(field, k, t)).collect();
    Ok(Matrix::from_rows(cols).transpose())
}

/// Checks `g_k G_k = G_k Pi(g) Delta_k(g)` exactly.
pub fn automorphism_identity_check(field: &Field, g: &MobiusTransform, k: usize) -> Result<bool> {
    let line = EvaluationSet::new(field, projective_line(field)?)?;
    let delta = delta_diagonal(field, g, k, &line);
    automorphism_identity_check_with(field, g, k, &delta)
}

/// As [`automorphism_identity_check`] with the diagonal supplied.
pub fn automorphism_identity_check_with(
    field: &Field,
    g: &MobiusTransform,
    k: usize,
    delta: &[Elem],
) -> Result<bool> {
    let gk = induced_matrix(field, g, k)?;
    let full = full_generator(field, k)?;
    if delta.len() != full.cols() {
        return Err(Error::LengthMismatch {
            expected: full.cols(),
            got: delta.len(),
        });
    }
    let lhs = gk.mul(field, &full);
    let mut rhs = full.mul(field, &permutation_matrix(field, g)?);
    for (j, &dj) in delta.iter().enumerate() {
        for i in 0..k {
            rhs[(i, j)] = field.mul(rhs[(i, j)], dj);
        }
    }
    Ok(lhs == rhs)
}
