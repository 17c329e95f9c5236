use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{BorelSet, MeasureError, StepDensity};
use crate::scalar::Scalar;

/// A point mass `weight · δ_location`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    #[serde(rename = "loc")]
    pub location: T,
    #[serde(rename = "w")]
    pub weight: T,
}

impl<T> Atom<T> {
    pub fn new(location: T, weight: T) -> Self {
        Self { location, weight }
    }
}

/// Finite signed measure: weighted atoms plus a piecewise-constant diffuse part.
///
/// Atoms are sorted by location, their locations are pairwise distinct and
/// their weights nonzero. Atoms that share a location at construction are
/// merged by adding weights (locations compare by exact equality), and
/// atoms whose weight ends up zero are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure<T>", into = "RawMeasure<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct SignedMeasure<T> {
    atoms: Vec<Atom<T>>,
    diffuse: StepDensity<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
struct RawMeasure<T> {
    atoms: Vec<Atom<T>>,
    #[serde(default)]
    diffuse: StepDensity<T>,
}

impl<T: Scalar> TryFrom<RawMeasure<T>> for SignedMeasure<T> {
    type Error = MeasureError;

    fn try_from(raw: RawMeasure<T>) -> Result<Self, Self::Error> {
        SignedMeasure::new(raw.atoms, raw.diffuse)
    }
}

impl<T> From<SignedMeasure<T>> for RawMeasure<T> {
    fn from(m: SignedMeasure<T>) -> Self {
        RawMeasure {
            atoms: m.atoms,
            diffuse: m.diffuse,
        }
    }
}

impl<T: Scalar> Default for SignedMeasure<T> {
    fn default() -> Self {
        Self::zero()
    }
}

fn by_location<T: Scalar>(a: &Atom<T>, b: &Atom<T>) -> Ordering {
    a.location
        .partial_cmp(&b.location)
        .expect("atom locations are finite")
}

impl<T: Scalar> SignedMeasure<T> {
    pub fn zero() -> Self {
        Self {
            atoms: Vec::new(),
            diffuse: StepDensity::zero(),
        }
    }

    pub fn new(mut atoms: Vec<Atom<T>>, diffuse: StepDensity<T>) -> Result<Self, MeasureError> {
        if atoms
            .iter()
            .any(|a| !a.location.is_finite_value() || !a.weight.is_finite_value())
        {
            return Err(MeasureError::NonFinite);
        }
        atoms.sort_by(by_location);
        Ok(Self {
            atoms: merge_sorted(atoms),
            diffuse,
        })
    }

    pub fn from_atoms(atoms: Vec<Atom<T>>) -> Result<Self, MeasureError> {
        Self::new(atoms, StepDensity::zero())
    }

    pub fn from_density(diffuse: StepDensity<T>) -> Self {
        Self {
            atoms: Vec::new(),
            diffuse,
        }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn diffuse(&self) -> &StepDensity<T> {
        &self.diffuse
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.diffuse.is_zero()
    }

    fn atoms_in<'a>(&'a self, set: &'a BorelSet<T>) -> impl Iterator<Item = &'a Atom<T>> + 'a {
        set.intervals().iter().flat_map(move |iv| {
            let start = self.atoms.partition_point(|a| a.location < *iv.lo());
            let end = self.atoms.partition_point(|a| a.location < *iv.hi());
            self.atoms[start..end].iter()
        })
    }

    /// `μ(B)`: atoms inside `B` plus the diffuse integral over `B`.
    pub fn evaluate(&self, set: &BorelSet<T>) -> T {
        let atomic = self
            .atoms_in(set)
            .fold(T::zero(), |acc, a| acc + a.weight.clone());
        atomic + self.diffuse.integral(set)
    }

    /// Mass of the whole measure.
    pub fn total(&self) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, a| acc + a.weight.clone())
            + self.diffuse.total()
    }

    /// Splits into mutually singular nonnegative parts with `μ = pos − neg`.
    pub fn jordan_decompose(&self) -> (Self, Self) {
        let (pos_atoms, neg_atoms): (Vec<_>, Vec<_>) = self
            .atoms
            .iter()
            .cloned()
            .partition(|a| a.weight > T::zero());
        let neg_atoms = neg_atoms
            .into_iter()
            .map(|a| Atom::new(a.location, -a.weight))
            .collect();
        (
            Self {
                atoms: pos_atoms,
                diffuse: self.diffuse.positive_part(),
            },
            Self {
                atoms: neg_atoms,
                diffuse: self.diffuse.negative_part(),
            },
        )
    }

    /// `|μ|(B) = μ₊(B) + μ₋(B)`.
    pub fn total_variation(&self, set: &BorelSet<T>) -> T {
        let atomic = self
            .atoms_in(set)
            .fold(T::zero(), |acc, a| acc + a.weight.abs());
        atomic + self.diffuse.abs_integral(set)
    }

    pub fn to_marked_point_pattern(&self) -> Result<MarkedPointPattern<T>, MeasureError> {
        if !self.diffuse.is_zero() {
            return Err(MeasureError::NonAtomicInput);
        }
        Ok(MarkedPointPattern {
            points: self
                .atoms
                .iter()
                .map(|a| (a.location.clone(), a.weight.clone()))
                .collect(),
        })
    }

    pub fn from_marked_point_pattern(
        pattern: &MarkedPointPattern<T>,
    ) -> Result<Self, MeasureError> {
        let mut atoms: Vec<Atom<T>> = pattern
            .points
            .iter()
            .map(|(loc, mark)| Atom::new(loc.clone(), mark.clone()))
            .collect();
        if atoms.iter().any(|a| a.weight.is_zero()) {
            return Err(MeasureError::ZeroMark);
        }
        if atoms
            .iter()
            .any(|a| !a.location.is_finite_value() || !a.weight.is_finite_value())
        {
            return Err(MeasureError::NonFinite);
        }
        atoms.sort_by(by_location);
        if let Some(w) = atoms.windows(2).find(|w| w[0].location == w[1].location) {
            return Err(MeasureError::DuplicateLocation(format!(
                "{:?}",
                w[0].location
            )));
        }
        Ok(Self {
            atoms,
            diffuse: StepDensity::zero(),
        })
    }

    /// `a·μ + b·ν`.
    pub fn linear_combine(a: &T, mu: &Self, b: &T, nu: &Self) -> Self {
        let mut atoms: Vec<Atom<T>> = Vec::with_capacity(mu.atoms.len() + nu.atoms.len());
        let (mut i, mut j) = (0, 0);
        while i < mu.atoms.len() || j < nu.atoms.len() {
            let order = match (mu.atoms.get(i), nu.atoms.get(j)) {
                (Some(x), Some(y)) => by_location(x, y),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let atom = match order {
                Ordering::Less => {
                    i += 1;
                    let x = &mu.atoms[i - 1];
                    Atom::new(x.location.clone(), a.clone() * x.weight.clone())
                }
                Ordering::Greater => {
                    j += 1;
                    let y = &nu.atoms[j - 1];
                    Atom::new(y.location.clone(), b.clone() * y.weight.clone())
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    let (x, y) = (&mu.atoms[i - 1], &nu.atoms[j - 1]);
                    Atom::new(
                        x.location.clone(),
                        a.clone() * x.weight.clone() + b.clone() * y.weight.clone(),
                    )
                }
            };
            if !atom.weight.is_zero() {
                atoms.push(atom);
            }
        }
        Self {
            atoms,
            diffuse: StepDensity::combine(a, &mu.diffuse, b, &nu.diffuse),
        }
    }

    pub fn scale(&self, a: &T) -> Self {
        Self::linear_combine(a, self, &T::zero(), &Self::zero())
    }

    /// Restriction to `set`; the diffuse part is cut at the set's endpoints.
    pub fn restrict(&self, set: &BorelSet<T>) -> Self {
        let atoms = self.atoms_in(set).cloned().collect();
        let mut breaks = Vec::new();
        let mut levels = Vec::new();
        for iv in set.intervals() {
            let mut cut: Vec<T> = vec![iv.lo().clone(), iv.hi().clone()];
            cut.extend(
                self.diffuse
                    .breaks()
                    .iter()
                    .filter(|b| iv.contains(b))
                    .cloned(),
            );
            cut.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
            cut.dedup();
            if let Some(last) = breaks.last() {
                if *last != cut[0] {
                    levels.push(T::zero());
                    breaks.push(cut[0].clone());
                }
            } else {
                breaks.push(cut[0].clone());
            }
            for w in cut.windows(2) {
                levels.push(self.diffuse.level_at(&w[0]));
                breaks.push(w[1].clone());
            }
        }
        let diffuse = StepDensity::new(breaks, levels).expect("refinement of a valid density");
        Self { atoms, diffuse }
    }

    pub fn to_f64(&self) -> SignedMeasure<f64> {
        SignedMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| {
                    Atom::new(
                        a.location.to_f64().unwrap_or(f64::NAN),
                        a.weight.to_f64().unwrap_or(f64::NAN),
                    )
                })
                .collect(),
            diffuse: self.diffuse.to_f64(),
        }
    }
}

fn merge_sorted<T: Scalar>(atoms: Vec<Atom<T>>) -> Vec<Atom<T>> {
    let mut out: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match out.last_mut() {
            Some(last) if last.location == atom.location => {
                last.weight = last.weight.clone() + atom.weight;
            }
            _ => out.push(atom),
        }
    }
    out.retain(|a| !a.weight.is_zero());
    out
}

/// Marked point pattern `N = Σ δ_(location, mark)` with nonzero marks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedPointPattern<T> {
    pub points: Vec<(T, T)>,
}

impl<T: Scalar> MarkedPointPattern<T> {
    pub fn new(points: Vec<(T, T)>) -> Self {
        Self { points }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫ s N(ds × B)`: sum of the marks whose locations fall in `B`.
    pub fn integrate_marks(&self, set: &BorelSet<T>) -> T {
        self.points
            .iter()
            .filter(|(loc, _)| set.contains(loc))
            .fold(T::zero(), |acc, (_, m)| acc + m.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> SignedMeasure<f64> {
        SignedMeasure::from_atoms(vec![Atom::new(0.5, 2.0), Atom::new(0.7, -3.0)]).unwrap()
    }

    fn unit() -> BorelSet<f64> {
        BorelSet::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(two_atoms().evaluate(&unit()), -1.0);
        assert_eq!(two_atoms().evaluate(&BorelSet::empty()), 0.0);
        let flat = SignedMeasure::from_density(StepDensity::constant(0.0, 1.0, 1.0).unwrap());
        assert_eq!(flat.evaluate(&BorelSet::interval(0.0, 0.5).unwrap()), 0.5);
    }

    #[test]
    fn atom_at_interval_edges() {
        let mu = two_atoms();
        assert_eq!(mu.evaluate(&BorelSet::interval(0.5, 0.7).unwrap()), 2.0);
        assert_eq!(mu.evaluate(&BorelSet::interval(0.4, 0.5).unwrap()), 0.0);
    }

    #[test]
    fn jordan_examples() {
        let (pos, neg) = two_atoms().jordan_decompose();
        assert_eq!(pos.atoms(), &[Atom::new(0.5, 2.0)]);
        assert_eq!(neg.atoms(), &[Atom::new(0.7, 3.0)]);
        let (p0, n0) = SignedMeasure::<f64>::zero().jordan_decompose();
        assert!(p0.is_zero() && n0.is_zero());
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(two_atoms().total_variation(&unit()), 5.0);
        assert_eq!(SignedMeasure::<f64>::zero().total_variation(&unit()), 0.0);
    }

    #[test]
    fn coincident_atoms_merge_and_cancel() {
        let mu = SignedMeasure::from_atoms(vec![
            Atom::new(0.2, 1.0),
            Atom::new(0.2, 2.0),
            Atom::new(0.3, 1.0),
            Atom::new(0.3, -1.0),
        ])
        .unwrap();
        assert_eq!(mu.atoms(), &[Atom::new(0.2, 3.0)]);
    }

    #[test]
    fn marked_pattern_examples() {
        let pattern = two_atoms().to_marked_point_pattern().unwrap();
        assert_eq!(pattern.points, vec![(0.5, 2.0), (0.7, -3.0)]);
        assert!(SignedMeasure::<f64>::zero()
            .to_marked_point_pattern()
            .unwrap()
            .is_empty());
        let flat = SignedMeasure::from_density(StepDensity::constant(0.0, 1.0, 1.0).unwrap());
        assert_eq!(
            flat.to_marked_point_pattern(),
            Err(MeasureError::NonAtomicInput)
        );
        let back = SignedMeasure::from_marked_point_pattern(&pattern).unwrap();
        assert_eq!(back, two_atoms());
        assert!(
            SignedMeasure::from_marked_point_pattern(&MarkedPointPattern::<f64>::new(vec![]))
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn marked_pattern_rejects_duplicates() {
        let dup = MarkedPointPattern::new(vec![(0.5, 1.0), (0.5, 2.0)]);
        assert!(matches!(
            SignedMeasure::from_marked_point_pattern(&dup),
            Err(MeasureError::DuplicateLocation(_))
        ));
        let zero = MarkedPointPattern::new(vec![(0.5, 0.0)]);
        assert_eq!(
            SignedMeasure::from_marked_point_pattern(&zero),
            Err(MeasureError::ZeroMark)
        );
    }

    #[test]
    fn linear_combine_examples() {
        let mu = two_atoms();
        assert!(SignedMeasure::linear_combine(&1.0, &mu, &-1.0, &mu).is_zero());
        assert!(SignedMeasure::linear_combine(&0.0, &mu, &0.0, &mu).is_zero());
    }

    #[test]
    fn restrict_keeps_inside_mass() {
        let mu = SignedMeasure::new(
            vec![Atom::new(0.1, 1.0), Atom::new(0.6, -2.0)],
            StepDensity::new(vec![0.0, 0.5, 1.0], vec![1.0, -3.0]).unwrap(),
        )
        .unwrap();
        let window = BorelSet::from_pairs(vec![(0.25, 0.55), (0.8, 0.9)]).unwrap();
        let r = mu.restrict(&window);
        assert_eq!(r.atoms(), &[] as &[Atom<f64>]);
        for probe in [(0.0, 1.0), (0.3, 0.52), (0.85, 2.0)] {
            let b = BorelSet::interval(probe.0, probe.1).unwrap();
            let expected = mu.evaluate(&b.intersection(&window));
            assert!((r.evaluate(&b) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn json_field_order() {
        let mu = SignedMeasure::new(
            vec![Atom::new(0.5, 2.0)],
            StepDensity::constant(0.0, 1.0, 0.5).unwrap(),
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&mu).unwrap(),
            r#"{"atoms":[{"loc":0.5,"w":2.0}],"diffuse":{"breaks":[0.0,1.0],"levels":[0.5]}}"#
        );
        let back: SignedMeasure<f64> = serde_json::from_str(
            r#"{"atoms":[{"loc":0.7,"w":-3.0},{"loc":0.5,"w":2.0}],"diffuse":{"breaks":[],"levels":[]}}"#,
        )
        .unwrap();
        assert_eq!(back, two_atoms());
    }
}
