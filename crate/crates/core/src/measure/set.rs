use serde::{Deserialize, Serialize};

use super::MeasureError;
use crate::scalar::Scalar;

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(T, T)", into = "(T, T)")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, MeasureError> {
        if !lo.is_finite_value() || !hi.is_finite_value() || lo > hi {
            return Err(MeasureError::InvalidInterval(format!("[{lo:?}, {hi:?})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn len(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        *x >= self.lo && *x < self.hi
    }

    /// Length of `[lo, hi) ∩ [a, b)`.
    pub fn overlap(&self, a: &T, b: &T) -> T {
        let lo = T::max_of(self.lo.clone(), a.clone());
        let hi = T::min_of(self.hi.clone(), b.clone());
        if hi > lo {
            hi - lo
        } else {
            T::zero()
        }
    }
}

impl<T: Scalar> TryFrom<(T, T)> for Interval<T> {
    type Error = MeasureError;

    fn try_from((lo, hi): (T, T)) -> Result<Self, Self::Error> {
        Interval::new(lo, hi)
    }
}

impl<T> From<Interval<T>> for (T, T) {
    fn from(iv: Interval<T>) -> Self {
        (iv.lo, iv.hi)
    }
}

/// A finite union of half-open intervals, kept sorted, disjoint and with
/// touching pieces merged so that equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval<T>>", into = "Vec<Interval<T>>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct BorelSet<T> {
    intervals: Vec<Interval<T>>,
}

impl<T: Scalar> BorelSet<T> {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
        }
    }

    pub fn interval(lo: T, hi: T) -> Result<Self, MeasureError> {
        Ok(Self::from_intervals(vec![Interval::new(lo, hi)?]))
    }

    pub fn from_intervals(mut intervals: Vec<Interval<T>>) -> Self {
        intervals.retain(|iv| !iv.is_empty());
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite bounds"));
        let mut merged: Vec<Interval<T>> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn from_pairs(pairs: Vec<(T, T)>) -> Result<Self, MeasureError> {
        let intervals = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_intervals(intervals))
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi <= *x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// Lebesgue measure of the set.
    pub fn length(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, iv| acc + iv.len())
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Self::from_intervals(all)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let lo = T::max_of(a.lo.clone(), b.lo.clone());
                let hi = T::min_of(a.hi.clone(), b.hi.clone());
                if hi > lo {
                    out.push(Interval { lo, hi });
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intersection(other) == *self
    }
}

impl<T: Scalar> TryFrom<Vec<Interval<T>>> for BorelSet<T> {
    type Error = MeasureError;

    fn try_from(intervals: Vec<Interval<T>>) -> Result<Self, Self::Error> {
        Ok(BorelSet::from_intervals(intervals))
    }
}

impl<T> From<BorelSet<T>> for Vec<Interval<T>> {
    fn from(set: BorelSet<T>) -> Self {
        set.intervals
    }
}
