//! Dormand–Prince 5(4) stepper for small autonomous-in-shape systems.

pub type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn comb(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Adaptive integrator carrying its step size between calls.
pub struct DormandPrince<F> {
    rhs: F,
    rtol: f64,
    atol: f64,
    h: f64,
}

impl<F> DormandPrince<F>
where
    F: Fn(f64, &State) -> State,
{
    pub fn new(rhs: F, rtol: f64, atol: f64, h0: f64) -> Self {
        Self { rhs, rtol, atol, h: h0 }
    }

    /// Advances `y` from `t0` to exactly `t1`.
    pub fn advance(&mut self, t0: f64, t1: f64, y: &mut State) -> Result<(), String> {
        let mut t = t0;
        let mut guard = 0usize;
        while t < t1 {
            guard += 1;
            if guard > 100_000 {
                return Err(format!("step size collapsed near r = {t}"));
            }
            let h = self.h.min(t1 - t);
            let (y_new, err) = self.step(t, y, h);
            let scale0 = self.atol + self.rtol * y[0].abs().max(y_new[0].abs());
            let scale1 = self.atol + self.rtol * y[1].abs().max(y_new[1].abs());
            let norm = ((err[0] / scale0).powi(2) + (err[1] / scale1).powi(2)).sqrt() / 2f64.sqrt();
            if !norm.is_finite() {
                if !y_new[0].is_finite() || !y_new[1].is_finite() {
                    // genuine blow-up of the trajectory: report the last state
                    *y = y_new;
                    return Ok(());
                }
                self.h = h * 0.1;
                continue;
            }
            if norm <= 1.0 {
                t += h;
                *y = y_new;
                let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                // only grow from full steps, a truncated final step says nothing
                if h == self.h {
                    self.h = h * factor;
                }
            } else {
                self.h = h * (0.9 * norm.powf(-0.2)).clamp(0.1, 1.0);
            }
            if self.h < 1e-14 {
                return Err(format!("step size underflow near r = {t}"));
            }
        }
        Ok(())
    }

    fn step(&self, t: f64, y: &State, h: f64) -> (State, State) {
        let f = &self.rhs;
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &comb(y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &comb(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &comb(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &comb(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &comb(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = comb(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);
        let err = [
            h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0]),
            h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1]),
        ];
        (y_new, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_one_period() {
        let mut dp = DormandPrince::new(|_t, y: &State| [y[1], -y[0]], 1e-12, 1e-14, 0.1);
        let mut y = [1.0, 0.0];
        dp.advance(0.0, 2.0 * std::f64::consts::PI, &mut y).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10);
        assert!(y[1].abs() < 1e-10);
    }

    #[test]
    fn exponential_growth() {
        let mut dp = DormandPrince::new(|_t, y: &State| [y[0], 0.0], 1e-12, 1e-14, 0.01);
        let mut y = [1.0, 0.0];
        for i in 0..10 {
            dp.advance(i as f64 * 0.3, (i + 1) as f64 * 0.3, &mut y).unwrap();
        }
        assert!((y[0] - 3f64.exp()).abs() < 1e-9 * 3f64.exp());
    }
}
