//! Exact certificates: Gram-matrix self-duality, minimum distance and MDS.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GrsCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

pub const DEFAULT_CODEWORD_BOUND: u128 = 1 << 22;
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 100_000;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Why a code failed the self-duality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SelfDualFailure {
    OddLength { n: usize },
    DimensionNotHalf { n: usize, k: usize },
    RankDeficient { rank: usize, k: usize },
    NonOrthogonal { row_a: usize, row_b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualVerdict {
    pub self_dual: bool,
    pub failure: Option<SelfDualFailure>,
}

/// `G G^T`.
pub fn gram(field: &Field, g: &Matrix) -> Matrix {
    g.mul(field, &g.transpose())
}

/// Self-dual iff `n = 2k`, `rank G = k` and `G G^T = 0`.
pub fn is_self_dual(code: &GrsCode) -> SelfDualVerdict {
    let fail = |f| SelfDualVerdict {
        self_dual: false,
        failure: Some(f),
    };
    let (n, k) = (code.n(), code.k());
    if n % 2 == 1 {
        return fail(SelfDualFailure::OddLength { n });
    }
    if n != 2 * k {
        return fail(SelfDualFailure::DimensionNotHalf { n, k });
    }
    let f = code.field();
    let g = code.generator();
    let rank = linalg::rank(f, g);
    if rank != k {
        return fail(SelfDualFailure::RankDeficient { rank, k });
    }
    for a in 0..k {
        for b in a..k {
            let ip = f.sum(g.row(a).iter().zip(g.row(b)).map(|(&x, &y)| f.mul(x, y)));
            if !ip.is_zero() {
                return fail(SelfDualFailure::NonOrthogonal { row_a: a, row_b: b });
            }
        }
    }
    SelfDualVerdict {
        self_dual: true,
        failure: None,
    }
}

fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|e| !e.is_zero()).count()
}

/// Minimum weight over all nonzero codewords, by enumerating messages up to
/// scalar multiples. Refuses when `q^k` exceeds `bound`.
pub fn min_distance_bruteforce(code: &GrsCode, bound: u128) -> Result<usize> {
    let f = code.field();
    let (n, k, q) = (code.n(), code.k(), f.q() as u128);
    let count = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > bound {
        return Err(Error::TooLarge { count, bound });
    }
    let g = code.generator();
    let values: Vec<Elem> = f.elements().collect();
    let mut best = usize::MAX;
    // first nonzero message coordinate is `lead` and equals 1
    for lead in 0..k {
        let mut word = g.row(lead).to_vec();
        let free = k - lead - 1;
        let mut digits = vec![0usize; free];
        loop {
            let w = weight(&word);
            if w > 0 {
                best = best.min(w);
            }
            let mut pos = 0;
            loop {
                if pos == free {
                    break;
                }
                let row = g.row(lead + 1 + pos);
                let old = values[digits[pos]];
                let next = (digits[pos] + 1) % values.len();
                let diff = f.sub(values[next], old);
                for (x, &r) in word.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(diff, r));
                }
                digits[pos] = next;
                if next != 0 {
                    break;
                }
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
    }
    if best == usize::MAX {
        return Err(Error::BadDimension { k: 0, n });
    }
    Ok(best)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(x) => acc = x / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Exact minimum distance from zero patterns: `d = n - s` where `s` is the
/// largest coordinate set on which some nonzero codeword vanishes, i.e. the
/// largest column set with rank below `rank G`. The deficient sets are
/// closed under taking subsets, so sizes are scanned upward from `rank G`.
/// `max_subsets` bounds the number of rank computations.
pub fn min_distance_by_zero_sets(code: &GrsCode, max_subsets: u128) -> Result<usize> {
    let f = code.field();
    let g = code.generator();
    let n = code.n();
    let full = linalg::rank(f, g);
    if full == 0 {
        return Err(Error::BadDimension { k: 0, n });
    }
    let mut checked = 0u128;
    for s in full..=n {
        let count = binomial(n, s);
        if checked + count > max_subsets {
            return Err(Error::TooLarge {
                count: checked + count,
                bound: max_subsets,
            });
        }
        checked += count;
        let mut idx: Vec<usize> = (0..s).collect();
        let mut deficient = false;
        loop {
            if linalg::rank_of_columns(f, g, &idx) < full {
                deficient = true;
                break;
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        if !deficient {
            return Ok(n - (s - 1));
        }
    }
    unreachable!("the full column set has full rank")
}

/// Which exact route produced a minimum distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Codewords,
    ZeroSets,
}

/// Exact minimum distance: codeword enumeration when `q^k <= bound`,
/// zero-pattern enumeration otherwise.
pub fn min_distance(code: &GrsCode, bound: u128) -> Result<(usize, DistanceMethod)> {
    match min_distance_bruteforce(code, bound) {
        Ok(d) => Ok((d, DistanceMethod::Codewords)),
        Err(Error::TooLarge { .. }) => {
            min_distance_by_zero_sets(code, bound).map(|d| (d, DistanceMethod::ZeroSets))
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MdsMode {
    Auto,
    Exhaustive,
    Bruteforce,
    Sampled,
    Skip,
}

impl std::str::FromStr for MdsMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(MdsMode::Auto),
            "exhaustive" => Ok(MdsMode::Exhaustive),
            "bruteforce" => Ok(MdsMode::Bruteforce),
            "sampled" => Ok(MdsMode::Sampled),
            "skip" => Ok(MdsMode::Skip),
            other => Err(format!("unknown MDS mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MdsOptions {
    pub mode: MdsMode,
    pub seed: u64,
    pub samples: usize,
    pub exhaustive_limit: u128,
    pub codeword_bound: u128,
}

impl Default for MdsOptions {
    fn default() -> Self {
        MdsOptions {
            mode: MdsMode::Auto,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            codeword_bound: DEFAULT_CODEWORD_BOUND,
        }
    }
}

impl MdsOptions {
    pub fn with_mode(mode: MdsMode) -> Self {
        MdsOptions {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsReport {
    /// The route actually taken (never `auto`).
    pub mode: MdsMode,
    /// `None` when skipped.
    pub verdict: Option<bool>,
    /// Minors checked, or codewords enumerated in brute-force mode.
    pub samples: u128,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    /// Columns of a singular k x k minor, if one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_columns: Option<Vec<usize>>,
}

/// Checks that the code meets the Singleton bound, see [`MdsMode`] for the
/// available strategies. `Auto` picks brute force when `q^k` is within the
/// codeword bound, all k x k minors when there are at most
/// `exhaustive_limit` of them, and seeded sampling otherwise.
pub fn mds_check(code: &GrsCode, opts: &MdsOptions) -> Result<MdsReport> {
    let (n, k) = (code.n(), code.k());
    let q = code.field().q() as u128;
    let codewords = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    let minors = binomial(n, k);
    let mode = match opts.mode {
        MdsMode::Auto if codewords <= opts.codeword_bound => MdsMode::Bruteforce,
        MdsMode::Auto if minors <= opts.exhaustive_limit => MdsMode::Exhaustive,
        MdsMode::Auto => MdsMode::Sampled,
        m => m,
    };
    let mut report = MdsReport {
        mode,
        verdict: None,
        samples: 0,
        seed: opts.seed,
        distance: None,
        singular_columns: None,
    };
    match mode {
        MdsMode::Skip => {}
        MdsMode::Bruteforce => {
            let d = min_distance_bruteforce(code, opts.codeword_bound)?;
            report.samples = (codewords - 1) / (q - 1);
            report.distance = Some(d);
            report.verdict = Some(d == n - k + 1);
        }
        MdsMode::Exhaustive => {
            if minors > opts.exhaustive_limit {
                return Err(Error::TooLarge {
                    count: minors,
                    bound: opts.exhaustive_limit,
                });
            }
            let oracle = linalg::MinorOracle::new(code.field(), code.generator());
            let mut idx: Vec<usize> = (0..k).collect();
            let mut checked = 0u128;
            report.verdict = Some(true);
            loop {
                checked += 1;
                if !oracle.is_nonsingular(&idx) {
                    report.verdict = Some(false);
                    report.singular_columns = Some(idx.clone());
                    break;
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
            report.samples = checked;
        }
        MdsMode::Sampled => {
            let oracle = linalg::MinorOracle::new(code.field(), code.generator());
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            report.verdict = Some(true);
            for i in 0..opts.samples {
                let mut cols = rand::seq::index::sample(&mut rng, n, k).into_vec();
                cols.sort_unstable();
                report.samples = i as u128 + 1;
                if !oracle.is_nonsingular(&cols) {
                    report.verdict = Some(false);
                    report.singular_columns = Some(cols);
                    break;
                }
            }
        }
        MdsMode::Auto => unreachable!(),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grs::{make_code, EvaluationSet, ScalingVector};

    fn gf9_code() -> (Field, GrsCode) {
        let f = Field::new(3, 2).unwrap();
        let w = f.primitive();
        let a = EvaluationSet::finite(&f, vec![f.zero(), f.one(), w, f.mul(w, w)]).unwrap();
        let c = make_code(&f, 2, a, ScalingVector::ones(&f, 4)).unwrap();
        (f, c)
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
        assert_eq!(binomial(156, 78) > DEFAULT_EXHAUSTIVE_LIMIT, true);
        assert_eq!(binomial(12, 6), 924);
    }

    #[test]
    fn generic_scaling_not_self_dual() {
        let (f, c) = gf9_code();
        let v = is_self_dual(&c);
        assert!(!v.self_dual);
        // row 0 with itself: 1+1+1+1 = 4 = 1 in GF(3)
        assert_eq!(v.failure, Some(SelfDualFailure::NonOrthogonal { row_a: 0, row_b: 0 }));
        assert_eq!(gram(&f, c.generator())[(0, 0)], f.one());
    }

    #[test]
    fn odd_length_fails_length_condition() {
        let f = Field::new(7, 1).unwrap();
        let a = EvaluationSet::finite(&f, (0..3).map(|i| f.from_int(i)).collect()).unwrap();
        let c = make_code(&f, 1, a, ScalingVector::ones(&f, 3)).unwrap();
        assert_eq!(
            is_self_dual(&c).failure,
            Some(SelfDualFailure::OddLength { n: 3 })
        );
    }

    #[test]
    fn distances_of_small_codes() {
        let (_, c) = gf9_code();
        assert_eq!(min_distance_bruteforce(&c, DEFAULT_CODEWORD_BOUND).unwrap(), 3);
        assert_eq!(min_distance_by_zero_sets(&c, 1000).unwrap(), 3);

        // [2,1] over GF(3): codewords are multiples of (1,1)
        let f3 = Field::new(3, 1).unwrap();
        let a = EvaluationSet::finite(&f3, vec![f3.zero(), f3.one()]).unwrap();
        let c = make_code(&f3, 1, a, ScalingVector::ones(&f3, 2)).unwrap();
        assert_eq!(min_distance_bruteforce(&c, DEFAULT_CODEWORD_BOUND).unwrap(), 2);

        let f7 = Field::new(7, 1).unwrap();
        let a = EvaluationSet::finite(&f7, vec![f7.from_int(2), f7.from_int(3), f7.from_int(5)])
            .unwrap();
        let c = make_code(&f7, 1, a, ScalingVector::ones(&f7, 3)).unwrap();
        assert_eq!(min_distance_bruteforce(&c, DEFAULT_CODEWORD_BOUND).unwrap(), 3);
        assert!(matches!(
            min_distance_bruteforce(&c, 5),
            Err(Error::TooLarge { count: 7, bound: 5 })
        ));
    }

    #[test]
    fn mds_modes_on_small_code() {
        let (_, c) = gf9_code();
        let r = mds_check(&c, &MdsOptions::with_mode(MdsMode::Exhaustive)).unwrap();
        assert_eq!((r.verdict, r.samples), (Some(true), 6));
        let r = mds_check(&c, &MdsOptions::default()).unwrap();
        assert_eq!(r.mode, MdsMode::Bruteforce);
        assert_eq!(r.verdict, Some(true));
        assert_eq!(r.distance, Some(3));
        let r = mds_check(&c, &MdsOptions::with_mode(MdsMode::Sampled)).unwrap();
        assert_eq!(r.verdict, Some(true));
        let r = mds_check(&c, &MdsOptions::with_mode(MdsMode::Skip)).unwrap();
        assert_eq!(r.verdict, None);
    }

    #[test]
    fn duplicated_column_is_not_mds() {
        let (f, c) = gf9_code();
        let mut g = c.generator().clone();
        for i in 0..2 {
            g[(i, 3)] = g[(i, 2)];
        }
        let bad = GrsCode::with_generator(
            &f,
            2,
            c.points().clone(),
            c.scaling().clone(),
            g,
            serde_json::Value::Null,
        )
        .unwrap();
        assert!(!bad.generator_consistent());
        let r = mds_check(&bad, &MdsOptions::with_mode(MdsMode::Exhaustive)).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert_eq!(r.singular_columns, Some(vec![2, 3]));
        let r = mds_check(&bad, &MdsOptions::default()).unwrap();
        assert_eq!((r.verdict, r.distance), (Some(false), Some(2)));
        assert_eq!(min_distance_by_zero_sets(&bad, 1000).unwrap(), 2);
    }
}
