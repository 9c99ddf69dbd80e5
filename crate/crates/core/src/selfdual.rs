//! Scaling vectors that make `GRS_{n/2}(A, v)` (or its extension by the
//! point at infinity) self-dual, from the quadratic characters of
//! `delta_A(a)`.
//!
//! For `A` of even size with every `eta(delta_A(a))` equal, take a square
//! `lambda / delta_A(a)` for a fixed `lambda in {1, w}`: the Gram entries
//! become `lambda * sum_a a^j / delta_A(a)` with `j <= n - 2`, which vanish.
//! For `A` of odd size with every `-delta_A(a)` a square, the finite weights
//! `-1 / delta_A(a)` leave `-1` in the corner `j = n - 1` of the Gram matrix
//! and the infinity column with weight 1 cancels it.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::grs::{self, is_self_dual, EvaluationSet, GrsCode, ScalingVector};

/// Per-point `delta_A(a)` together with `eta(delta)` and `eta(-delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterProfile {
    pub points: Vec<Elem>,
    pub deltas: Vec<Elem>,
    pub chars: Vec<i8>,
    pub neg_chars: Vec<i8>,
    pub all_equal: bool,
    pub all_neg_square: bool,
}

/// Summary form of [`CharacterProfile`] for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub chars: Vec<i8>,
    pub neg_chars: Vec<i8>,
    pub all_equal: bool,
    pub all_neg_square: bool,
}

impl CharacterProfile {
    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            chars: self.chars.clone(),
            neg_chars: self.neg_chars.clone(),
            all_equal: self.all_equal,
            all_neg_square: self.all_neg_square,
        }
    }
}

pub fn profile(field: &Field, set: &EvaluationSet) -> Result<CharacterProfile> {
    let points = set.finite_points()?;
    if points.len() < 2 {
        return Err(Error::SetTooSmall);
    }
    let deltas = grs::deltas(field, set)?;
    let chars = deltas
        .iter()
        .map(|&d| field.quadratic_character(d))
        .collect::<Result<Vec<_>>>()?;
    let neg_chars = deltas
        .iter()
        .map(|&d| field.quadratic_character(field.neg(d)))
        .collect::<Result<Vec<_>>>()?;
    let all_equal = chars.iter().all(|&c| c == chars[0]);
    let all_neg_square = neg_chars.iter().all(|&c| c == 1);
    Ok(CharacterProfile {
        points,
        deltas,
        chars,
        neg_chars,
        all_equal,
        all_neg_square,
    })
}

fn certify(code: GrsCode) -> Result<GrsCode> {
    let verdict = is_self_dual(&code);
    if !verdict.self_dual {
        return Err(Error::InternalVerificationFailed(format!(
            "constructed code is not self-dual: {:?}",
            verdict.failure
        )));
    }
    Ok(code)
}

/// Self-dual `GRS_{n/2}(A, v)` for `A` of even size with all
/// `eta(delta_A(a))` equal, using `v_i = sqrt(lambda / delta_A(a_i))`.
pub fn finite_code(field: &Field, set: &EvaluationSet, provenance: Value) -> Result<GrsCode> {
    if set.has_infinity() {
        return Err(Error::InfinityInSet);
    }
    if set.len() % 2 == 1 {
        return Err(Error::OddLength);
    }
    let prof = profile(field, set)?;
    if !prof.all_equal {
        return Err(Error::CharactersNotEqual);
    }
    let lambda = if prof.chars[0] == 1 {
        field.one()
    } else {
        field.primitive()
    };
    let v = prof
        .deltas
        .iter()
        .map(|&d| field.sqrt(field.div(lambda, d)?))
        .collect::<Result<Vec<_>>>()?;
    let code = GrsCode::new(
        field,
        set.len() / 2,
        set.clone(),
        ScalingVector::new(field, v)?,
        provenance,
    )?;
    certify(code)
}

pub fn finite_scaling(field: &Field, set: &EvaluationSet) -> Result<ScalingVector> {
    let code = finite_code(field, set, json!({ "kind": "lemma2" }))?;
    Ok(code.scaling().clone())
}

/// Self-dual `GRS_{(n+1)/2}(A ∪ {inf}, v)` for `A` of odd size with every
/// `-delta_A(a)` a square: `v_i = sqrt(-1 / delta_A(a_i))`, `v_inf = 1`.
pub fn extended_code(field: &Field, set: &EvaluationSet, provenance: Value) -> Result<GrsCode> {
    if set.has_infinity() {
        return Err(Error::InfinityInSet);
    }
    if set.len() % 2 == 0 {
        return Err(Error::EvenLength);
    }
    let prof = profile(field, set)?;
    if !prof.all_neg_square {
        return Err(Error::NegCharacterNotSquare);
    }
    let mut v = prof
        .deltas
        .iter()
        .map(|&d| field.sqrt(field.inv(field.neg(d))?))
        .collect::<Result<Vec<_>>>()?;
    v.push(field.one());
    let extended = set.with_infinity(field)?;
    let code = GrsCode::new(
        field,
        extended.len() / 2,
        extended,
        ScalingVector::new(field, v)?,
        provenance,
    )?;
    certify(code)
}

pub fn extended_scaling(
    field: &Field,
    set: &EvaluationSet,
) -> Result<(EvaluationSet, ScalingVector)> {
    let code = extended_code(field, set, json!({ "kind": "lemma3" }))?;
    Ok((code.points().clone(), code.scaling().clone()))
}

/// A self-dual code of even length `n` over the field exists iff
/// `(-1)^{n/2}` is a square.
pub fn pless_exists(field: &Field, n: usize) -> Result<bool> {
    if n % 2 == 1 {
        return Err(Error::OddN);
    }
    let s = field.pow_u(field.neg(field.one()), (n / 2) as u64);
    field.is_square(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::new(3, 2).unwrap()
    }

    fn family1_toy_set(f: &Field) -> EvaluationSet {
        let w2 = f.exp(2);
        let one = f.one();
        EvaluationSet::finite(f, vec![one, f.neg(one), w2, f.neg(w2)]).unwrap()
    }

    #[test]
    fn profile_of_toy_set() {
        let f = gf9();
        let p = profile(&f, &family1_toy_set(&f)).unwrap();
        assert_eq!(p.chars, vec![1, 1, 1, 1]);
        assert!(p.all_equal);
    }

    #[test]
    fn profile_gf3_mixed() {
        let f = Field::new(3, 1).unwrap();
        let a = EvaluationSet::finite(&f, vec![f.zero(), f.one()]).unwrap();
        let p = profile(&f, &a).unwrap();
        assert_eq!(p.deltas, vec![f.from_int(2), f.one()]);
        assert_eq!(p.chars, vec![-1, 1]);
        assert!(!p.all_equal);
        assert!(matches!(finite_scaling(&f, &a), Err(Error::CharactersNotEqual)));
        let single = EvaluationSet::finite(&f, vec![f.one()]).unwrap();
        assert!(matches!(profile(&f, &single), Err(Error::SetTooSmall)));
    }

    #[test]
    fn finite_code_on_toy_set() {
        let f = gf9();
        let a = family1_toy_set(&f);
        let v = finite_scaling(&f, &a).unwrap();
        let c = grs::make_code(&f, 2, a, v).unwrap();
        assert!(grs::gram(&f, c.generator()).is_zero());
    }

    #[test]
    fn finite_code_with_nonsquare_common_character() {
        // For A = {a, b}: delta = (a - b, b - a). -1 is a square mod 13, so
        // the characters always agree; a nonsquare difference forces lambda = w.
        let f = Field::new(13, 1).unwrap();
        let mut found = false;
        'outer: for a in 0..13 {
            for b in a + 1..13 {
                let set =
                    EvaluationSet::finite(&f, vec![f.from_int(a), f.from_int(b)]).unwrap();
                let p = profile(&f, &set).unwrap();
                if p.all_equal && p.chars[0] == -1 {
                    let c = finite_code(&f, &set, Value::Null).unwrap();
                    assert!(is_self_dual(&c).self_dual);
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn extended_code_on_cube_roots() {
        // A = {0, 1, -1} in GF(9): delta = (-1, 2, 2) = (2, 2, 2)
        let f = gf9();
        let one = f.one();
        let a = EvaluationSet::finite(&f, vec![f.zero(), one, f.neg(one)]).unwrap();
        let p = profile(&f, &a).unwrap();
        assert_eq!(p.deltas, vec![f.from_int(2); 3]);
        assert!(p.all_neg_square);
        let (pts, v) = extended_scaling(&f, &a).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.has_infinity());
        assert_eq!(*v.entries().last().unwrap(), one);
        let c = grs::make_code(&f, 2, pts, v).unwrap();
        assert!(is_self_dual(&c).self_dual);

        let even = EvaluationSet::finite(&f, vec![f.zero(), one]).unwrap();
        assert!(matches!(extended_scaling(&f, &even), Err(Error::EvenLength)));
        assert!(matches!(finite_scaling(&f, &a), Err(Error::OddLength)));
    }

    #[test]
    fn pless_examples() {
        let f3 = Field::new(3, 1).unwrap();
        assert!(!pless_exists(&f3, 2).unwrap());
        assert!(pless_exists(&f3, 4).unwrap());
        assert!(pless_exists(&gf9(), 2).unwrap());
        let f13 = Field::new(13, 1).unwrap();
        assert!((2..20).step_by(2).all(|n| pless_exists(&f13, n).unwrap()));
        assert!(matches!(pless_exists(&f13, 3), Err(Error::OddN)));
    }
}
