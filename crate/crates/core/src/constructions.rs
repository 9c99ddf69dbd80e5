//! Self-dual GRS codes over `GF(r^2)` from unions of cosets of a subgroup
//! `H = <w^{(q-1)/n'}>` inside a larger subgroup `G`.
//!
//! With `n' | q - 1`, the first family uses `n1 = gcd(n', r + 1)`,
//! `G = <w^{(r+1)/n1}>`, and `t <= (r - 1)/n2` cosets; the second uses
//! `n1 = gcd(n', r - 1)`, `G = <w^{(r-1)/n1}>`, and `t <= (r + 1)/n2`.
//! In both, `n2 = n'/n1`, `n = t n'` and `A_0 = A ∪ {0}`.
//!
//! | family | case | condition                                   | length | via    |
//! |--------|------|---------------------------------------------|--------|--------|
//! | 1      | i    | n even, (r+1)/n1 even                       | n      | finite on A   |
//! | 1      | ii   | n odd                                       | n + 1  | finite on A_0 |
//! | 1      | iii  | n even                                      | n + 2  | extended on A_0 |
//! | 2      | i    | (r-1)/n1 even, t n2 even                    | n      | finite on A   |
//! | 2      | ii   | n2, (r+1)/2 (t-1) even; or n2 odd, t even, t < (r+1)/n2 | n + 2 | extended on A_0 |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{is_prime, Elem, Field};
use crate::grs::{EvaluationSet, GrsCode};
use crate::selfdual::{finite_code, extended_code};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Theorem {
    One,
    Two,
}

impl From<Theorem> for u8 {
    fn from(t: Theorem) -> u8 {
        match t {
            Theorem::One => 1,
            Theorem::Two => 2,
        }
    }
}

impl TryFrom<u8> for Theorem {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            _ => Err(format!("theorem must be 1 or 2, got {v}")),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    I,
    Ii,
    Iii,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
        })
    }
}

impl FromStr for Case {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "i" => Ok(Case::I),
            "ii" => Ok(Case::Ii),
            "iii" => Ok(Case::Iii),
            other => Err(format!("case must be i, ii or iii, got {other:?}")),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(p, e)` with `n = p^e` for an odd prime `p`.
pub fn odd_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let p = (3..=n).step_by(2).find(|d| n % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let (mut m, mut e) = (n, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// `r` with `q = r^2`, `r` an odd prime power.
pub fn sqrt_order(q: u64) -> Result<u64> {
    let r = (q as f64).sqrt().round() as u64;
    let r = (r.saturating_sub(1)..=r + 1)
        .find(|&x| x * x == q)
        .ok_or(Error::NotOddSquare(q))?;
    odd_prime_power(r).ok_or(Error::NotOddSquare(q))?;
    Ok(r)
}

/// The field `GF(r^2)`.
pub fn field_for_square(q: u64) -> Result<Field> {
    let r = sqrt_order(q)?;
    let (p, e) = odd_prime_power(r).expect("checked by sqrt_order");
    Field::new(p, 2 * e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub r: u64,
    pub n_prime: u64,
    pub t: u64,
    pub theorem: Theorem,
    pub case: Case,
    pub n1: u64,
    pub n2: u64,
}

impl ConstructionParams {
    /// Validates divisibility and the range of `t`; case conditions are
    /// checked separately by [`ConstructionParams::check_case`].
    pub fn new(q: u64, n_prime: u64, t: u64, theorem: Theorem, case: Case) -> Result<Self> {
        let r = sqrt_order(q)?;
        if n_prime == 0 || (q - 1) % n_prime != 0 {
            return Err(Error::InvalidParams(format!("n' = {n_prime} does not divide q - 1")));
        }
        if theorem == Theorem::Two && case == Case::Iii {
            return Err(Error::InvalidParams("the second family has no case iii".into()));
        }
        let n1 = match theorem {
            Theorem::One => gcd(n_prime, r + 1),
            Theorem::Two => gcd(n_prime, r - 1),
        };
        let n2 = n_prime / n1;
        let params = ConstructionParams {
            r,
            n_prime,
            t,
            theorem,
            case,
            n1,
            n2,
        };
        let cosets = params.coset_count();
        if params.group_side() % n2 != 0 {
            return Err(Error::InvalidParams(format!("n2 = {n2} does not divide {}", params.group_side())));
        }
        if t == 0 || t > cosets {
            return Err(Error::InvalidParams(format!("t = {t} outside 1..={cosets}")));
        }
        Ok(params)
    }

    pub fn q(&self) -> u64 {
        self.r * self.r
    }

    /// `r - 1` for the first family, `r + 1` for the second.
    fn group_side(&self) -> u64 {
        match self.theorem {
            Theorem::One => self.r - 1,
            Theorem::Two => self.r + 1,
        }
    }

    /// Number of cosets of H in G.
    pub fn coset_count(&self) -> u64 {
        self.group_side() / self.n2
    }

    /// Exponent step so that `G = <w^step>`.
    pub fn g_step(&self) -> u64 {
        match self.theorem {
            Theorem::One => (self.r + 1) / self.n1,
            Theorem::Two => (self.r - 1) / self.n1,
        }
    }

    /// `n = t n'`.
    pub fn n(&self) -> u64 {
        self.t * self.n_prime
    }

    pub fn code_length(&self) -> u64 {
        match (self.theorem, self.case) {
            (_, Case::I) => self.n(),
            (Theorem::One, Case::Ii) => self.n() + 1,
            _ => self.n() + 2,
        }
    }

    fn family2_odd_branch(&self) -> bool {
        self.theorem == Theorem::Two && self.case == Case::Ii && self.n2 % 2 == 1
    }

    pub fn check_case(&self) -> Result<()> {
        let n = self.n();
        let r = self.r;
        let (ok, what) = match (self.theorem, self.case) {
            (Theorem::One, Case::I) => (
                n % 2 == 0 && ((r + 1) / self.n1) % 2 == 0,
                "needs n and (r+1)/n1 even",
            ),
            (Theorem::One, Case::Ii) => (n % 2 == 1, "needs n odd"),
            (Theorem::One, Case::Iii) => (n % 2 == 0, "needs n even"),
            (Theorem::Two, Case::I) => (
                ((r - 1) / self.n1) % 2 == 0 && (self.t * self.n2) % 2 == 0,
                "needs (r-1)/n1 and t n2 even",
            ),
            (Theorem::Two, Case::Ii) => (
                (self.n2 % 2 == 0 && ((r + 1) / 2 * (self.t - 1)) % 2 == 0)
                    || (self.n2 % 2 == 1 && self.t % 2 == 0 && self.t < self.coset_count()),
                "needs n2 and (r+1)(t-1)/2 even, or n2 odd, t even and t < (r+1)/n2",
            ),
            (Theorem::Two, Case::Iii) => (false, "no such case"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::CaseConditionViolated(format!(
                "family {} case {}: {what}",
                self.theorem, self.case
            )))
        }
    }
}

/// Coset exponents `mu_b`; the representatives are `w^{mu_b * step}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSelection {
    pub mu: Vec<u64>,
    pub reps: Vec<Elem>,
}

/// `mu_b = b - 1`, except in the odd-`n2` branch of the second family's
/// case ii, where `mu_t` is bumped to `t` if `(r+1)/2 + sum mu` is odd.
pub fn select_cosets(field: &Field, params: &ConstructionParams) -> Result<CosetSelection> {
    if field.q() != params.q() {
        return Err(Error::InvalidParams(format!(
            "field has order {}, parameters need {}",
            field.q(),
            params.q()
        )));
    }
    let mut mu: Vec<u64> = (0..params.t).collect();
    if params.family2_odd_branch() {
        if params.t >= params.coset_count() {
            return Err(Error::InvalidParams(format!(
                "t = {} leaves no spare coset (needs t <= {})",
                params.t,
                params.coset_count() - 1
            )));
        }
        if ((params.r + 1) / 2 + mu.iter().sum::<u64>()) % 2 == 1 {
            *mu.last_mut().unwrap() = params.t;
        }
    }
    let step = params.g_step();
    let reps = mu
        .iter()
        .map(|&m| field.exp((m * step % field.order()) as i64))
        .collect();
    Ok(CosetSelection { mu, reps })
}

fn coset_union(
    field: &Field,
    params: &ConstructionParams,
    include_zero: bool,
) -> Result<(EvaluationSet, CosetSelection)> {
    let sel = select_cosets(field, params)?;
    let h = field.subgroup(params.n_prime)?;
    let mut pts: Vec<Elem> = sel
        .reps
        .iter()
        .flat_map(|&beta| h.iter().map(move |&x| field.mul(beta, x)))
        .collect();
    if include_zero {
        pts.push(field.zero());
    }
    Ok((EvaluationSet::finite(field, pts)?, sel))
}

/// `A = ∪ beta_b H` (plus 0 when `include_zero`) for the first family.
pub fn family1_eval_set(
    field: &Field,
    params: &ConstructionParams,
    include_zero: bool,
) -> Result<EvaluationSet> {
    if params.theorem != Theorem::One {
        return Err(Error::InvalidParams("expected first-family parameters".into()));
    }
    Ok(coset_union(field, params, include_zero)?.0)
}

/// `A = ∪ beta_b H` (plus 0 when `include_zero`) for the second family.
pub fn family2_eval_set(
    field: &Field,
    params: &ConstructionParams,
    include_zero: bool,
) -> Result<EvaluationSet> {
    if params.theorem != Theorem::Two {
        return Err(Error::InvalidParams("expected second-family parameters".into()));
    }
    Ok(coset_union(field, params, include_zero)?.0)
}

/// Builds and certifies the self-dual code for the given parameters.
pub fn construct(field: &Field, params: &ConstructionParams) -> Result<GrsCode> {
    params.check_case()?;
    let with_zero = params.case != Case::I;
    let (set, sel) = coset_union(field, params, with_zero)?;
    let provenance = json!({
        "kind": "coset",
        "theorem": params.theorem,
        "case": params.case,
        "q": params.q(),
        "r": params.r,
        "n_prime": params.n_prime,
        "t": params.t,
        "n1": params.n1,
        "n2": params.n2,
        "mu": sel.mu,
    });
    match (params.theorem, params.case) {
        (Theorem::One, Case::Iii) | (Theorem::Two, Case::Ii) => extended_code(field, &set, provenance),
        _ => finite_code(field, &set, provenance),
    }
}

pub fn family1_construct(field: &Field, params: &ConstructionParams) -> Result<GrsCode> {
    if params.theorem != Theorem::One {
        return Err(Error::InvalidParams("expected first-family parameters".into()));
    }
    construct(field, params)
}

pub fn family2_construct(field: &Field, params: &ConstructionParams) -> Result<GrsCode> {
    if params.theorem != Theorem::Two {
        return Err(Error::InvalidParams("expected second-family parameters".into()));
    }
    construct(field, params)
}

/// One reachable length with a witness parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthEntry {
    #[serde(rename = "N")]
    pub length: u64,
    pub theorem: Theorem,
    pub case: Case,
    pub n_prime: u64,
    pub t: u64,
    pub r: u64,
}

impl LengthEntry {
    pub fn params(&self) -> Result<ConstructionParams> {
        ConstructionParams::new(self.r * self.r, self.n_prime, self.t, self.theorem, self.case)
    }
}

/// Every even length `N <= max_n` reachable by either family, one witness
/// (smallest `n'`, then smallest `t`) per `(N, family, case)`, ordered by
/// `N`, family, case.
pub fn enumerate_lengths(q: u64, max_n: u64) -> Result<Vec<LengthEntry>> {
    let r = sqrt_order(q)?;
    let mut found: BTreeMap<(u64, Theorem, Case), LengthEntry> = BTreeMap::new();
    let divisors = (1..q).filter(|d| (q - 1) % d == 0);
    for n_prime in divisors {
        for theorem in [Theorem::One, Theorem::Two] {
            let cases: &[Case] = match theorem {
                Theorem::One => &[Case::I, Case::Ii, Case::Iii],
                Theorem::Two => &[Case::I, Case::Ii],
            };
            for &case in cases {
                let Ok(base) = ConstructionParams::new(q, n_prime, 1, theorem, case) else {
                    continue;
                };
                for t in 1..=base.coset_count() {
                    let params = ConstructionParams { t, ..base.clone() };
                    if params.check_case().is_err() {
                        continue;
                    }
                    let length = params.code_length();
                    if length > max_n || length % 2 == 1 {
                        continue;
                    }
                    found.entry((length, theorem, case)).or_insert(LengthEntry {
                        length,
                        theorem,
                        case,
                        n_prime,
                        t,
                        r,
                    });
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grs::{is_self_dual, EvaluationPoint};

    #[test]
    fn prime_powers() {
        assert_eq!(odd_prime_power(25), Some((5, 2)));
        assert_eq!(odd_prime_power(23), Some((23, 1)));
        assert_eq!(odd_prime_power(15), None);
        assert_eq!(odd_prime_power(8), None);
        assert_eq!(sqrt_order(529).unwrap(), 23);
        assert!(matches!(sqrt_order(27), Err(Error::NotOddSquare(27))));
        assert!(matches!(sqrt_order(225), Err(Error::NotOddSquare(225))));
        assert!(matches!(sqrt_order(4), Err(Error::NotOddSquare(4))));
    }

    #[test]
    fn toy_family1_set() {
        let f = field_for_square(9).unwrap();
        let p = ConstructionParams::new(9, 2, 2, Theorem::One, Case::I).unwrap();
        assert_eq!((p.n1, p.n2), (2, 1));
        let a = family1_eval_set(&f, &p, false).unwrap();
        let one = f.one();
        let w2 = f.exp(2);
        assert_eq!(
            a.finite_points().unwrap(),
            vec![one, f.neg(one), w2, f.neg(w2)]
        );
        let c = family1_construct(&f, &p).unwrap();
        assert_eq!((c.n(), c.k()), (4, 2));
        assert!(is_self_dual(&c).self_dual);
    }

    #[test]
    fn t_out_of_range() {
        // r = 3: (r-1)/n2 = 2 cosets
        assert!(matches!(
            ConstructionParams::new(9, 2, 3, Theorem::One, Case::I),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            ConstructionParams::new(9, 3, 1, Theorem::One, Case::I),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn toy_family2_set() {
        let f = field_for_square(9).unwrap();
        let p = ConstructionParams::new(9, 2, 1, Theorem::Two, Case::I).unwrap();
        assert_eq!((p.n1, p.n2), (2, 1));
        let a = family2_eval_set(&f, &p, false).unwrap();
        assert_eq!(a.finite_points().unwrap(), vec![f.one(), f.neg(f.one())]);
    }

    #[test]
    fn toy_family2_case_ii() {
        // n2 = 1 odd, t = 2 even, t < (r+1)/n2 = 4
        let f = field_for_square(9).unwrap();
        let p = ConstructionParams::new(9, 2, 2, Theorem::Two, Case::Ii).unwrap();
        let c = family2_construct(&f, &p).unwrap();
        assert_eq!(c.n(), 6);
        assert!(c.points().contains(EvaluationPoint::Infinity));
        assert!(is_self_dual(&c).self_dual);
    }

    #[test]
    fn coset_bump_rule() {
        let f = field_for_square(9).unwrap();
        // (r+1)/2 = 2, sum mu = 0 + 1 = 1: odd, bump mu_2 to 2
        let p = ConstructionParams::new(9, 2, 2, Theorem::Two, Case::Ii).unwrap();
        let sel = select_cosets(&f, &p).unwrap();
        assert_eq!(sel.mu, vec![0, 2]);
        let p = ConstructionParams::new(9, 2, 2, Theorem::One, Case::I).unwrap();
        assert_eq!(select_cosets(&f, &p).unwrap().mu, vec![0, 1]);
        // t = (r+1)/n2 leaves no room in the odd branch
        let p = ConstructionParams::new(9, 2, 4, Theorem::Two, Case::Ii).unwrap();
        assert!(matches!(select_cosets(&f, &p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn case_conditions() {
        let f = field_for_square(9).unwrap();
        let p = ConstructionParams::new(9, 2, 2, Theorem::One, Case::Ii).unwrap();
        assert!(matches!(
            construct(&f, &p),
            Err(Error::CaseConditionViolated(_))
        ));
        assert!(matches!(
            ConstructionParams::new(9, 2, 1, Theorem::Two, Case::Iii),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn enumerate_toy() {
        let e = enumerate_lengths(9, 10).unwrap();
        assert!(e.iter().any(|x| x.length == 4
            && x.theorem == Theorem::One
            && x.case == Case::I
            && x.n_prime == 2
            && x.t == 2));
        assert!(e.windows(2).all(|w| w[0].length <= w[1].length));
        assert!(e.iter().all(|x| x.length % 2 == 0 && x.length <= 10));
        let line = serde_json::to_string(&e[0]).unwrap();
        assert!(line.starts_with("{\"N\":"));
    }
}
