/// Neumaier-compensated running sum, used for long sums of logarithms.
/// Absorbs `-inf` (a zero factor) permanently.
#[derive(Clone, Copy, Debug, Default)]
pub struct LnAccumulator {
    sum: f64,
    comp: f64,
}

impl LnAccumulator {
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY || self.sum == f64::NEG_INFINITY {
            self.sum = f64::NEG_INFINITY;
            self.comp = 0.0;
            return;
        }
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if self.sum == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.sum + self.comp
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates() {
        let mut acc = LnAccumulator::default();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 1000.0);
        acc.add(f64::NEG_INFINITY);
        acc.add(3.0);
        assert_eq!(acc.value(), f64::NEG_INFINITY);
    }
}
