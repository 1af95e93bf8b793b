use nalgebra::DVector;

/// Components beyond this magnitude count as a blow-up.
pub const BLOWUP_LIMIT: f64 = 1e12;

/// One classical 4th-order step for dy/dt = f(y).
#[inline]
pub fn rk4_step<F>(f: &F, y: &DVector<f64>, dt: f64) -> DVector<f64>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let k1 = f(y);
    let k2 = f(&(y + &k1 * (dt / 2.0)));
    let k3 = f(&(y + &k2 * (dt / 2.0)));
    let k4 = f(&(y + &k3 * dt));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

pub fn is_finite_and_bounded(y: &DVector<f64>) -> bool {
    y.iter().all(|x| x.is_finite() && x.abs() <= BLOWUP_LIMIT)
}

/// Split a duration into full steps of dt plus an optional short remainder.
/// Returns (full_steps, remainder).
pub fn split_duration(t_final: f64, dt: f64) -> (usize, f64) {
    let steps = (t_final / dt + 1e-9).floor() as usize;
    let rem = t_final - steps as f64 * dt;
    if rem > dt * 1e-9 {
        (steps, rem)
    } else {
        (steps, 0.0)
    }
}

/// Compensated (Kahan) sum; order-independent results require a fixed
/// iteration order, which all callers in this crate use.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
