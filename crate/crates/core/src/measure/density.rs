use serde::{Deserialize, Serialize};

use super::{BorelSet, MeasureError};
use crate::scalar::Scalar;

/// Piecewise-constant signed density: `levels[i]` holds on `[breaks[i], breaks[i+1])`,
/// zero outside `[breaks[0], breaks[last])`.
///
/// Stored canonically: no zero-width cells, no equal adjacent levels, no
/// zero-level cells at either end. The zero density has no breaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity<T>", into = "RawDensity<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct StepDensity<T> {
    breaks: Vec<T>,
    levels: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct RawDensity<T> {
    breaks: Vec<T>,
    levels: Vec<T>,
}

impl<T: Scalar> TryFrom<RawDensity<T>> for StepDensity<T> {
    type Error = MeasureError;

    fn try_from(raw: RawDensity<T>) -> Result<Self, Self::Error> {
        StepDensity::new(raw.breaks, raw.levels)
    }
}

impl<T> From<StepDensity<T>> for RawDensity<T> {
    fn from(d: StepDensity<T>) -> Self {
        RawDensity {
            breaks: d.breaks,
            levels: d.levels,
        }
    }
}

impl<T: Scalar> Default for StepDensity<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> StepDensity<T> {
    pub fn zero() -> Self {
        Self {
            breaks: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn new(breaks: Vec<T>, levels: Vec<T>) -> Result<Self, MeasureError> {
        if breaks.is_empty() && levels.is_empty() {
            return Ok(Self::zero());
        }
        if breaks.len() != levels.len() + 1 {
            return Err(MeasureError::InvalidDensity(format!(
                "{} breaks for {} levels",
                breaks.len(),
                levels.len()
            )));
        }
        if breaks.iter().chain(&levels).any(|v| !v.is_finite_value()) {
            return Err(MeasureError::InvalidDensity("non-finite value".into()));
        }
        if breaks.windows(2).any(|w| w[0] > w[1]) {
            return Err(MeasureError::InvalidDensity(
                "breaks must be non-decreasing".into(),
            ));
        }
        Ok(Self::canonical(breaks, levels))
    }

    /// Density `level` on `[lo, hi)`.
    pub fn constant(lo: T, hi: T, level: T) -> Result<Self, MeasureError> {
        Self::new(vec![lo, hi], vec![level])
    }

    fn canonical(breaks: Vec<T>, levels: Vec<T>) -> Self {
        let mut b: Vec<T> = Vec::with_capacity(breaks.len());
        let mut l: Vec<T> = Vec::with_capacity(levels.len());
        for (i, level) in levels.into_iter().enumerate() {
            let (lo, hi) = (&breaks[i], &breaks[i + 1]);
            if lo == hi {
                continue;
            }
            match (b.last_mut(), l.last()) {
                (Some(end), Some(prev)) if *prev == level => *end = hi.clone(),
                _ => {
                    if b.is_empty() {
                        b.push(lo.clone());
                    }
                    l.push(level);
                    b.push(hi.clone());
                }
            }
        }
        while l.last().is_some_and(|v| v.is_zero()) {
            l.pop();
            b.pop();
        }
        let lead = l.iter().take_while(|v| v.is_zero()).count();
        if lead > 0 {
            l.drain(..lead);
            b.drain(..lead);
        }
        if l.is_empty() {
            b.clear();
        }
        Self {
            breaks: b,
            levels: l,
        }
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Cells as `(lo, hi, level)`.
    pub fn cells(&self) -> impl Iterator<Item = (&T, &T, &T)> {
        self.levels
            .iter()
            .enumerate()
            .map(move |(i, l)| (&self.breaks[i], &self.breaks[i + 1], l))
    }

    pub fn level_at(&self, x: &T) -> T {
        if self.is_zero() || *x < self.breaks[0] {
            return T::zero();
        }
        let idx = self.breaks.partition_point(|b| b <= x);
        if idx == 0 || idx >= self.breaks.len() {
            T::zero()
        } else {
            self.levels[idx - 1].clone()
        }
    }

    pub fn integral(&self, set: &BorelSet<T>) -> T {
        let mut total = T::zero();
        for iv in set.intervals() {
            for (lo, hi, level) in self.cells() {
                let len = iv.overlap(lo, hi);
                if !len.is_zero() {
                    total = total + len * level.clone();
                }
            }
        }
        total
    }

    /// Integral over the whole line.
    pub fn total(&self) -> T {
        self.cells().fold(T::zero(), |acc, (lo, hi, l)| {
            acc + (hi.clone() - lo.clone()) * l.clone()
        })
    }

    /// Integral of `|density|` over `set`.
    pub fn abs_integral(&self, set: &BorelSet<T>) -> T {
        self.positive_part().integral(set) + self.negative_part().integral(set)
    }

    pub fn positive_part(&self) -> Self {
        self.map_levels(|l| T::max_of(l.clone(), T::zero()))
    }

    pub fn negative_part(&self) -> Self {
        self.map_levels(|l| T::max_of(-l.clone(), T::zero()))
    }

    fn map_levels(&self, f: impl Fn(&T) -> T) -> Self {
        Self::canonical(self.breaks.clone(), self.levels.iter().map(f).collect())
    }

    /// `a·self + b·other` on the common refinement of both break sets.
    pub fn combine(a: &T, lhs: &Self, b: &T, rhs: &Self) -> Self {
        let mut breaks: Vec<T> = lhs.breaks.iter().chain(&rhs.breaks).cloned().collect();
        breaks.sort_by(|x, y| x.partial_cmp(y).expect("finite breaks"));
        breaks.dedup();
        if breaks.len() < 2 {
            return Self::zero();
        }
        let levels = breaks[..breaks.len() - 1]
            .iter()
            .map(|x| a.clone() * lhs.level_at(x) + b.clone() * rhs.level_at(x))
            .collect();
        Self::canonical(breaks, levels)
    }

    pub fn to_f64(&self) -> StepDensity<f64> {
        let cvt = |v: &T| v.to_f64().unwrap_or(f64::NAN);
        StepDensity::canonical(
            self.breaks.iter().map(cvt).collect(),
            self.levels.iter().map(cvt).collect(),
        )
    }
}
