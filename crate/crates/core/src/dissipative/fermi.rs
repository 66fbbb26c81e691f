use super::{DissipativeError, Result};

/// Upper-level weight of the two-level logistic decay.
///
/// With `q = 1 - p2_initial` the weight is `(1-q) / (1-q + q e^{At})`. Beyond
/// `At = 700` the exponential would overflow, so the same expression is
/// evaluated as `exp(-softplus(At + ln q - ln(1-q)))`.
pub fn fermi_closed_form(p2_initial: f64, a: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p2_initial) {
        return Err(DissipativeError::Domain(format!("p2_initial = {p2_initial} is outside [0, 1]")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(DissipativeError::Domain(format!("rate A = {a} must be finite and non-negative")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(DissipativeError::Domain(format!("time t = {t} must be finite and non-negative")));
    }
    let p2 = p2_initial;
    let q = 1.0 - p2;
    if t == 0.0 || q == 0.0 || p2 == 0.0 {
        return Ok(p2);
    }
    let at = a * t;
    if at <= 700.0 {
        return Ok(p2 / (p2 + q * at.exp()));
    }
    let z = at + q.ln() - p2.ln();
    let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
    Ok((-softplus).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_cases() {
        assert_eq!(fermi_closed_form(1.0, 3.0, 1e6).unwrap(), 1.0);
        assert_eq!(fermi_closed_form(0.37, 3.0, 0.0).unwrap(), 0.37);
        assert_eq!(fermi_closed_form(0.0, 3.0, 2.0).unwrap(), 0.0);
        assert!(fermi_closed_form(1.1, 1.0, 1.0).is_err());
        assert!(fermi_closed_form(0.5, -1.0, 1.0).is_err());
        assert!(fermi_closed_form(0.5, 1.0, -1.0).is_err());
    }

    #[test]
    fn log_branch_is_continuous() {
        let below = fermi_closed_form(0.99, 1.0, 700.0).unwrap();
        let above = fermi_closed_form(0.99, 1.0, 700.0 + 1e-9).unwrap();
        assert!(((below - above) / below).abs() < 1e-6);
        let far = fermi_closed_form(0.99, 1.0, 2000.0).unwrap();
        assert!(far > 0.0 || far == 0.0);
        assert!(far.is_finite());
    }
}
