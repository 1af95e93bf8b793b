/// The velocity-space measure preserved by the ideal (geodesic) flow.
///
/// Unimodular algebras preserve the constant measure; others need a
/// correction, e.g. d(v0)d(v1)/v1 on the half-plane. Custom measures are
/// restricted to coordinate power laws `coeff * prod_a |v_a|^{p_a} + offset`.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantMeasure {
    Constant,
    /// mu(v) = 1/v1 on the upper half-plane v1 > 0 (two-dimensional models).
    HalfPlane,
    PowerLaw {
        coeff: f64,
        powers: Vec<f64>,
        offset: f64,
    },
}

impl InvariantMeasure {
    /// Evaluate mu at a velocity point. Singular points yield non-finite
    /// values or zero; callers that need positivity must check.
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            InvariantMeasure::Constant => 1.0,
            InvariantMeasure::HalfPlane => 1.0 / v[1],
            InvariantMeasure::PowerLaw {
                coeff,
                powers,
                offset,
            } => {
                let mut m = *coeff;
                for (x, p) in v.iter().zip(powers) {
                    if *p != 0.0 {
                        m *= x.abs().powf(*p);
                    }
                }
                m + offset
            }
        }
    }

    /// True if mu is identically 1 (the unimodular case).
    pub fn is_uniform(&self) -> bool {
        match self {
            InvariantMeasure::Constant => true,
            InvariantMeasure::HalfPlane => false,
            InvariantMeasure::PowerLaw {
                coeff,
                powers,
                offset,
            } => {
                (powers.iter().all(|p| *p == 0.0) && coeff + offset == 1.0)
                    || (*coeff == 0.0 && *offset == 1.0)
            }
        }
    }

    /// True if mu is finite and positive at v.
    pub fn is_regular_at(&self, v: &[f64]) -> bool {
        let m = self.eval(v);
        m.is_finite() && m > 0.0
    }
}
