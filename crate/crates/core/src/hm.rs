//! Exact model of the Hartman-Mycielski group `HM(G)`: finite step functions
//! `[0, 1) → G` with rational breakpoints.
//!
//! The base group is either a finite product of cyclic groups with the
//! discrete `0/1` metric or the rational circle `Q/Z` with arc-length
//! distance. Distances between step functions are measured by `mu_diff`
//! (measure of disagreement) and by the Ky Fan metric of convergence in
//! measure. All arithmetic is over `BigRational`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HmError {
    #[error("step functions live over different base groups")]
    BaseMismatch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid step function: {0}")]
    Invalid(String),
    #[error("cannot parse base group {0:?}")]
    ParseBase(String),
}

pub type Result<T> = std::result::Result<T, HmError>;

pub type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn frac(x: &Q) -> Q {
    x - x.floor()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseGroup {
    /// `Z/n_1 × … × Z/n_r` with the discrete metric.
    Discrete(Vec<u64>),
    /// `Q/Z` with arc-length distance.
    Circle,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Discrete(Vec<u64>),
    /// Representative in `[0, 1)`.
    Circle(Q),
}

impl BaseGroup {
    pub fn cyclic(n: u64) -> BaseGroup {
        BaseGroup::Discrete(vec![n])
    }

    pub fn zero(&self) -> Value {
        match self {
            BaseGroup::Discrete(f) => Value::Discrete(vec![0; f.len()]),
            BaseGroup::Circle => Value::Circle(Q::zero()),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (BaseGroup::Discrete(f), Value::Discrete(x), Value::Discrete(y)) => {
                Value::Discrete(f.iter().zip(x.iter().zip(y)).map(|(&n, (&x, &y))| (x + y) % n).collect())
            }
            (BaseGroup::Circle, Value::Circle(x), Value::Circle(y)) => Value::Circle(frac(&(x + y))),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (self, a) {
            (BaseGroup::Discrete(f), Value::Discrete(x)) => {
                Value::Discrete(f.iter().zip(x).map(|(&n, &x)| (n - x) % n).collect())
            }
            (BaseGroup::Circle, Value::Circle(x)) => Value::Circle(frac(&-x)),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn dist(&self, a: &Value, b: &Value) -> Q {
        match (a, b) {
            (Value::Discrete(x), Value::Discrete(y)) => {
                if x == y {
                    Q::zero()
                } else {
                    Q::one()
                }
            }
            (Value::Circle(x), Value::Circle(y)) => {
                let d = frac(&(x - y));
                let e = Q::one() - &d;
                d.min(e)
            }
            _ => panic!("values from different base groups"),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (BaseGroup::Discrete(f), Value::Discrete(x)) => {
                f.len() == x.len() && f.iter().zip(x).all(|(&n, &x)| x < n)
            }
            (BaseGroup::Circle, Value::Circle(x)) => !x.is_negative() && x < &Q::one(),
            _ => false,
        }
    }

    /// A uniformly random element; circle values have denominators up to
    /// `max_den`.
    pub fn random_value<R: Rng>(&self, rng: &mut R, max_den: i64) -> Value {
        match self {
            BaseGroup::Discrete(f) => Value::Discrete(f.iter().map(|&n| rng.gen_range(0..n)).collect()),
            BaseGroup::Circle => {
                let d = rng.gen_range(1..=max_den);
                Value::Circle(q(rng.gen_range(0..d), d))
            }
        }
    }
}

impl fmt::Display for BaseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseGroup::Discrete(fs) => {
                let parts: Vec<String> = fs.iter().map(|n| format!("Z/{n}")).collect();
                f.write_str(&parts.join("x"))
            }
            BaseGroup::Circle => f.write_str("Q/Z"),
        }
    }
}

impl FromStr for BaseGroup {
    type Err = HmError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q/Z" {
            return Ok(BaseGroup::Circle);
        }
        let factors = s
            .split('x')
            .map(|part| {
                part.trim()
                    .strip_prefix("Z/")
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|&n| n >= 2)
            })
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| HmError::ParseBase(s.to_string()))?;
        Ok(BaseGroup::Discrete(factors))
    }
}

impl Serialize for BaseGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Discrete(x) if x.len() == 1 => write!(f, "{}", x[0]),
            Value::Discrete(x) => {
                let parts: Vec<String> = x.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Value::Circle(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `values[i]` is taken on `[breaks[i], breaks[i+1])`; `breaks` runs from `0`
/// to `1` strictly increasing and adjacent values differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction {
    base: BaseGroup,
    breaks: Vec<Q>,
    values: Vec<Value>,
}

impl StepFunction {
    pub fn zero(base: &BaseGroup) -> StepFunction {
        Self::constant(base, base.zero())
    }

    pub fn constant(base: &BaseGroup, v: Value) -> StepFunction {
        StepFunction { base: base.clone(), breaks: vec![Q::zero(), Q::one()], values: vec![v] }
    }

    /// `g_t`: `g` on `[0, t)`, zero on `[t, 1)`.
    pub fn indicator(base: &BaseGroup, g: Value, t: &Q) -> Result<StepFunction> {
        if t.is_zero() {
            return Ok(Self::zero(base));
        }
        if t == &Q::one() {
            return Self::from_pieces(base, vec![Q::zero(), Q::one()], vec![g]);
        }
        Self::from_pieces(base, vec![Q::zero(), t.clone(), Q::one()], vec![g, base.zero()])
    }

    pub fn from_pieces(base: &BaseGroup, breaks: Vec<Q>, values: Vec<Value>) -> Result<StepFunction> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(HmError::Invalid("need one value per interval".into()));
        }
        if !breaks[0].is_zero() || breaks[breaks.len() - 1] != Q::one() {
            return Err(HmError::Invalid("breakpoints must run from 0 to 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HmError::Invalid("breakpoints must increase strictly".into()));
        }
        if let Some(v) = values.iter().find(|v| !base.contains(v)) {
            return Err(HmError::Invalid(format!("{v} is not an element of {base}")));
        }
        Ok(Self::canonical(base.clone(), breaks, values))
    }

    fn canonical(base: BaseGroup, breaks: Vec<Q>, values: Vec<Value>) -> StepFunction {
        let mut nb = vec![breaks[0].clone()];
        let mut nv: Vec<Value> = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            if nv.last() == Some(&v) {
                *nb.last_mut().expect("non-empty") = breaks[i + 1].clone();
            } else {
                nv.push(v);
                nb.push(breaks[i + 1].clone());
            }
        }
        StepFunction { base, breaks: nb, values: nv }
    }

    pub fn base(&self) -> &BaseGroup {
        &self.base
    }

    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0] == self.base.zero()
    }

    pub fn eval(&self, t: &Q) -> &Value {
        let i = self.breaks[1..].partition_point(|b| b <= t);
        &self.values[i.min(self.values.len() - 1)]
    }

    /// Pieces of the common refinement of `self` and `other`:
    /// `(length, value of self, value of other)`.
    fn overlay<'a>(&'a self, other: &'a StepFunction) -> Vec<(Q, Q, &'a Value, &'a Value)> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let mut start = Q::zero();
        while i < self.values.len() && j < other.values.len() {
            let end = (&self.breaks[i + 1]).min(&other.breaks[j + 1]).clone();
            out.push((start.clone(), end.clone(), &self.values[i], &other.values[j]));
            if self.breaks[i + 1] == end {
                i += 1;
            }
            if other.breaks[j + 1] == end {
                j += 1;
            }
            start = end;
        }
        out
    }

    fn combine(&self, other: &StepFunction, op: impl Fn(&Value, &Value) -> Value) -> Result<StepFunction> {
        if self.base != other.base {
            return Err(HmError::BaseMismatch);
        }
        let pieces = self.overlay(other);
        let mut breaks = vec![Q::zero()];
        let mut values = Vec::with_capacity(pieces.len());
        for (_, end, a, b) in pieces {
            breaks.push(end);
            values.push(op(a, b));
        }
        Ok(Self::canonical(self.base.clone(), breaks, values))
    }

    /// Pointwise distance profile against `other`: `(length, distance)`.
    fn distances(&self, other: &StepFunction) -> Result<Vec<(Q, Q)>> {
        if self.base != other.base {
            return Err(HmError::BaseMismatch);
        }
        Ok(self
            .overlay(other)
            .into_iter()
            .map(|(s, e, a, b)| (e - s, self.base.dist(a, b)))
            .collect())
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("[{},{}):{v}", self.breaks[i], self.breaks[i + 1]))
            .collect();
        write!(f, "{} over {}", parts.join(" "), self.base)
    }
}

#[derive(Serialize)]
struct PieceJson<'a> {
    from: String,
    to: String,
    value: &'a Value,
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            base: &'a BaseGroup,
            pieces: Vec<PieceJson<'a>>,
        }
        Json {
            base: &self.base,
            pieces: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| PieceJson {
                    from: self.breaks[i].to_string(),
                    to: self.breaks[i + 1].to_string(),
                    value: v,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

pub fn sf_add(f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    let base = f.base.clone();
    f.combine(g, |a, b| base.add(a, b))
}

pub fn sf_neg(f: &StepFunction) -> StepFunction {
    let values = f.values.iter().map(|v| f.base.neg(v)).collect();
    StepFunction::canonical(f.base.clone(), f.breaks.clone(), values)
}

pub fn sf_sub(f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    sf_add(f, &sf_neg(g))
}

/// Lebesgue measure of `{t : f(t) ≠ g(t)}`.
pub fn mu_diff(f: &StepFunction, g: &StepFunction) -> Result<Q> {
    Ok(f.distances(g)?
        .into_iter()
        .filter(|(_, d)| !d.is_zero())
        .fold(Q::zero(), |acc, (len, _)| acc + len))
}

/// `min { ε ≥ 0 : μ{t : d(f(t), g(t)) > ε} ≤ ε }`.
///
/// `ε ↦ μ{d > ε}` is a non-increasing step function with jumps at the
/// distance values, so the minimum is either a distance value or a level of
/// that step function.
pub fn kyfan(f: &StepFunction, g: &StepFunction) -> Result<Q> {
    let profile = f.distances(g)?;
    let tail = |eps: &Q| {
        profile
            .iter()
            .filter(|(_, d)| d > eps)
            .fold(Q::zero(), |acc, (len, _)| acc + len)
    };
    let mut candidates: Vec<Q> = vec![Q::zero()];
    for (_, d) in &profile {
        candidates.push(d.clone());
        candidates.push(tail(d));
    }
    candidates.push(tail(&Q::zero()));
    Ok(candidates
        .into_iter()
        .filter(|c| &tail(c) <= c)
        .min()
        .expect("the largest distance is always admissible"))
}

/// `h` on `[0, s)`, zero on `[s, 1)`.
pub fn truncate(h: &StepFunction, s: &Q) -> StepFunction {
    let (lo, hi) = (Q::zero(), Q::one());
    let s = s.clamp(&lo, &hi);
    let mut breaks = vec![Q::zero()];
    let mut values = Vec::new();
    for (i, v) in h.values.iter().enumerate() {
        if &h.breaks[i] >= s {
            break;
        }
        breaks.push((&h.breaks[i + 1]).min(s).clone());
        values.push(v.clone());
    }
    if breaks.last() != Some(&Q::one()) {
        breaks.push(Q::one());
        values.push(h.base.zero());
    }
    StepFunction::canonical(h.base.clone(), breaks, values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallPathReport {
    pub samples: usize,
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub epsilon: Q,
    /// Largest `mu_diff(h_s, 0)` over the samples.
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub max_measure: Q,
    /// Largest `mu_diff(h_s, h_s') - |s - s'|`, clamped at zero.
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub max_deviation: Q,
    pub pass: bool,
}

/// Checks that `s ↦ h_s` is a path inside `O({0}, ε)` from `0` to `h` with
/// modulus `|s - s'|`, at the sample points `i / samples`.
pub fn ball_path_check(h: &StepFunction, eps: &Q, samples: usize) -> Result<BallPathReport> {
    let zero = StepFunction::zero(&h.base);
    let size = mu_diff(h, &zero)?;
    if &size >= eps {
        return Err(HmError::PreconditionFailed(format!("mu(h != 0) = {size} is not below {eps}")));
    }
    let n = samples.max(1);
    let points: Vec<Q> = (0..=n).map(|i| q(i as i64, n as i64)).collect();
    let paths: Vec<StepFunction> = points.iter().map(|s| truncate(h, s)).collect();
    let mut max_measure = Q::zero();
    let mut max_deviation = Q::zero();
    let mut pass = true;
    for (i, hs) in paths.iter().enumerate() {
        let m = mu_diff(hs, &zero)?;
        pass &= &m < eps;
        max_measure = max_measure.max(m);
        for j in i + 1..paths.len() {
            let d = mu_diff(hs, &paths[j])?;
            let gap = &points[j] - &points[i];
            if d > gap {
                pass = false;
                max_deviation = max_deviation.max(d - gap);
            }
        }
    }
    pass &= &paths[n] == h;
    Ok(BallPathReport { samples: n + 1, epsilon: eps.clone(), max_measure, max_deviation, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub approx: StepFunction,
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub distance: Q,
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub bound: Q,
    /// `distance < ε`.
    pub within_epsilon: bool,
}

/// Rounds `f` pointwise to the nearest element of `(1/N)Z/Z`.
pub fn density_approx(f: &StepFunction, n: u64, eps: &Q) -> Result<DensityReport> {
    if f.base != BaseGroup::Circle {
        return Err(HmError::BaseMismatch);
    }
    if n == 0 {
        return Err(HmError::PreconditionFailed("N must be positive".into()));
    }
    let nq = Q::from_integer(BigInt::from(n));
    let half = q(1, 2);
    let values = f
        .values
        .iter()
        .map(|v| match v {
            Value::Circle(x) => Value::Circle(frac(&((x * &nq + &half).floor() / &nq))),
            Value::Discrete(_) => unreachable!("circle base"),
        })
        .collect();
    let approx = StepFunction::canonical(BaseGroup::Circle, f.breaks.clone(), values);
    let distance = kyfan(f, &approx)?;
    let bound = Q::one() / (nq * Q::from_integer(BigInt::from(2)));
    Ok(DensityReport { within_epsilon: &distance < eps, approx, distance, bound })
}

/// `(s, mu_diff(h_s, 0))` at `s = i / samples`, as CSV.
pub fn truncation_trace_csv(h: &StepFunction, samples: usize) -> String {
    let zero = StepFunction::zero(&h.base);
    let n = samples.max(1);
    let mut out = String::from("s,mu\n");
    for i in 0..=n {
        let s = q(i as i64, n as i64);
        let m = mu_diff(&truncate(h, &s), &zero).expect("same base");
        out.push_str(&format!("{s},{m}\n"));
    }
    out
}

/// A random step function with at most `max_pieces` pieces and breakpoints
/// with denominators up to `max_den`.
pub fn random_function<R: Rng>(rng: &mut R, base: &BaseGroup, max_pieces: usize, max_den: i64) -> StepFunction {
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let mut cuts: Vec<Q> = (1..pieces)
        .map(|_| {
            let d = rng.gen_range(2..=max_den.max(2));
            q(rng.gen_range(1..d), d)
        })
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut breaks = vec![Q::zero()];
    breaks.extend(cuts);
    breaks.push(Q::one());
    let values = (0..breaks.len() - 1).map(|_| base.random_value(rng, max_den)).collect();
    StepFunction::canonical(base.clone(), breaks, values)
}
