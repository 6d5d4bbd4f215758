//! Exact q-expansion of the discriminant form `q prod (1 - q^m)^24`.

use crate::error::{Error, Result};

/// Sparse series `(exponent, coefficient)`, exponents ascending.
pub(crate) type SparseSeries = Vec<(usize, i128)>;

#[cfg(test)]
/// Euler's pentagonal-number expansion of `prod_{m>=1} (1 - q^m)` up to `q^(len-1)`.
pub(crate) fn pentagonal_series(len: usize) -> SparseSeries {
    let mut out = vec![(0usize, 1i128)];
    for k in 1usize.. {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let lower = k * (3 * k - 1) / 2;
        let upper = k * (3 * k + 1) / 2;
        if lower >= len {
            break;
        }
        out.push((lower, sign));
        if upper < len {
            out.push((upper, sign));
        }
    }
    out
}

/// Jacobi's expansion `prod (1 - q^m)^3 = sum_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}`.
pub(crate) fn eta_cubed_series(len: usize) -> SparseSeries {
    (0usize..)
        .map(|m| (m * (m + 1) / 2, m))
        .take_while(|&(e, _)| e < len)
        .map(|(e, m)| {
            let c = (2 * m + 1) as i128;
            (e, if m % 2 == 0 { c } else { -c })
        })
        .collect()
}

/// `sparse * dense`, truncated to `dense.len()` terms, with overflow checks.
pub(crate) fn sparse_times_dense(sparse: &SparseSeries, dense: &[i128]) -> Result<Vec<i128>> {
    let len = dense.len();
    let mut out = vec![0i128; len];
    for &(e, c) in sparse {
        if e >= len {
            break;
        }
        for (i, &d) in dense[..len - e].iter().enumerate() {
            if d == 0 {
                continue;
            }
            let prod = c.checked_mul(d).ok_or(Error::CoefficientOverflow { n: i + e + 1 })?;
            out[i + e] = out[i + e]
                .checked_add(prod)
                .ok_or(Error::CoefficientOverflow { n: i + e + 1 })?;
        }
    }
    Ok(out)
}

/// `tau(1..=n_max)`; index 0 of the result holds 0.
pub(crate) fn ramanujan_tau(n_max: usize) -> Result<Vec<i128>> {
    let len = n_max; // tau(n) is the coefficient of q^(n-1) in eta^24 / q
    let cube = eta_cubed_series(len);
    let mut dense = vec![0i128; len];
    for &(e, c) in &cube {
        dense[e] = c;
    }
    for _ in 1..8 {
        dense = sparse_times_dense(&cube, &dense)?;
    }
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0);
    out.extend(dense);
    Ok(out)
}
