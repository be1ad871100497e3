//! Compensated summation.

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays
/// accurate when an addend is larger in magnitude than the running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Sum in a canonical order (ascending by `total_cmp`) so the result is
/// bit-identical for every permutation of `terms`.
/// Serialize a real, writing infinities as the strings `"inf"` and
/// `"-inf"` since JSON has no literal for them.
pub fn serialize_extended<S: serde::Serializer>(
    value: &f64,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    if value.is_infinite() {
        serializer.serialize_str(if *value > 0.0 { "inf" } else { "-inf" })
    } else {
        serializer.serialize_f64(*value)
    }
}

pub fn canonical_sum(terms: &[f64]) -> f64 {
    let mut sorted = terms.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms() {
        let terms = [1e16, 1.0, -1e16];
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(terms.into_iter().collect::<CompensatedSum>().value(), 1.0);
    }

    #[test]
    fn many_tenths() {
        let acc: CompensatedSum = std::iter::repeat_n(0.1, 1_000_000).collect();
        assert!((acc.value() - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn canonical_sum_is_permutation_invariant() {
        let a = [0.1, 1e10, -3.7, 2.2e-8, 5.5];
        let b = [5.5, 2.2e-8, 0.1, -3.7, 1e10];
        assert_eq!(canonical_sum(&a).to_bits(), canonical_sum(&b).to_bits());
    }

    #[test]
    fn adding_zero_is_exact() {
        let a = [0.3, -1.7, 2.9];
        let b = [0.3, 0.0, -1.7, 2.9];
        assert_eq!(canonical_sum(&a).to_bits(), canonical_sum(&b).to_bits());
    }
}
