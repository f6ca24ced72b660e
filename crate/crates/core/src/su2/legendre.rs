use crate::error::{Error, Result};

/// Legendre polynomial `P_l(x)` by the three-term recurrence
/// `(l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}`, seeded with `P_0 = 1`, `P_1 = x`.
pub fn legendre(l: u32, x: f64) -> Result<f64> {
    Ok(*legendre_all(l, x)?.last().expect("non-empty"))
}

/// `[P_0(x), ..., P_lmax(x)]`.
pub fn legendre_all(lmax: u32, x: f64) -> Result<Vec<f64>> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")));
    }
    let mut out = Vec::with_capacity(lmax as usize + 1);
    out.push(1.0);
    if lmax >= 1 {
        out.push(x);
    }
    for l in 1..lmax as usize {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * out[l] - lf * out[l - 1]) / (lf + 1.0);
        out.push(next);
    }
    Ok(out)
}
