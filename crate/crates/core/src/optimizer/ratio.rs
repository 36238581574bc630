use serde::Serialize;

/// `(a1 x² + a2 x + a3) / (b1 x² + b2 x + b3)`: the cost along the budget
/// line, written in the free sampling probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticRatio {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// Stationary points of a [`QuadraticRatio`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CriticalPoints {
    /// Two real roots of the derivative numerator.
    Quadratic { delta: f64, roots: [f64; 2] },
    /// Leading coefficient vanishes; a single root.
    Linear { root: f64 },
    /// Negative discriminant: the minimum sits at the lower endpoint when
    /// `a1 b2 > a2 b1` and at the upper one otherwise.
    NegativeDelta { delta: f64, prefer_lower: bool },
    /// Derivative numerator is identically zero or constant.
    None,
}

impl CriticalPoints {
    pub fn roots(&self) -> Vec<f64> {
        match *self {
            CriticalPoints::Quadratic { roots, .. } => roots.to_vec(),
            CriticalPoints::Linear { root } => vec![root],
            _ => Vec::new(),
        }
    }

    pub fn delta(&self) -> Option<f64> {
        match *self {
            CriticalPoints::Quadratic { delta, .. } | CriticalPoints::NegativeDelta { delta, .. } => Some(delta),
            _ => None,
        }
    }
}

impl QuadraticRatio {
    pub fn numerator(&self, x: f64) -> f64 {
        (self.a1 * x + self.a2) * x + self.a3
    }

    pub fn denominator(&self, x: f64) -> f64 {
        (self.b1 * x + self.b2) * x + self.b3
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.numerator(x) / self.denominator(x)
    }

    /// Zeros of `F'G - FG'`, which is
    /// `(a1b2 - a2b1) x² + 2(a1b3 - a3b1) x + (a2b3 - a3b2)`.
    pub fn critical_points(&self) -> CriticalPoints {
        let Self { a1, a2, a3, b1, b2, b3 } = *self;
        let lead = a1 * b2 - a2 * b1;
        let mid = a1 * b3 - a3 * b1;
        let tail = a2 * b3 - a3 * b2;
        if lead == 0.0 {
            if mid == 0.0 {
                return CriticalPoints::None;
            }
            return CriticalPoints::Linear {
                root: (a3 * b2 - a2 * b3) / (2.0 * mid),
            };
        }
        let delta = (2.0 * mid).powi(2) - 4.0 * lead * tail;
        if delta < 0.0 {
            return CriticalPoints::NegativeDelta {
                delta,
                prefer_lower: lead > 0.0,
            };
        }
        let s = delta.sqrt();
        let base = 2.0 * (a3 * b1 - a1 * b3);
        CriticalPoints::Quadratic {
            delta,
            roots: [(base + s) / (2.0 * lead), (base - s) / (2.0 * lead)],
        }
    }
}
