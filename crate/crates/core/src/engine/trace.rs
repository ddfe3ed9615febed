//! The trace pairing `J` and trace monomials in `X_j` and `X_j^ι`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::FormedSpace;
use crate::linalg::{QMatrix, Rationals, Q};
use crate::tensor::decode;

/// `Trace(b ∘ (X_1 ⊗ … ⊗ X_d))`, summed entrywise without forming the
/// Kronecker product.
pub fn trace_pairing_j(b: &QMatrix, n: usize, xs: &[QMatrix]) -> Result<Q> {
    let d = xs.len();
    let size = n.pow(d as u32);
    b.check_shape(size, size)?;
    for x in xs {
        x.check_shape(n, n)?;
    }
    let mut acc = Q::zero();
    for (r, c, v) in b.iter() {
        // b[R,C]·∏ X_k[C_k, R_k]
        let rd = decode(n, d, r);
        let cd = decode(n, d, c);
        let mut term = v.clone();
        for k in 0..d {
            let x = xs[k].get(cd[k], rd[k]);
            if x.is_zero() {
                term = Q::zero();
                break;
            }
            term *= x;
        }
        acc += term;
    }
    Ok(acc)
}

/// `Trace(U_{i_1} ⋯ U_{i_k})` with `U_j = X_j` or `X_j^ι` when starred.
/// Word indices are 1-based.
pub fn trace_monomial(space: &FormedSpace, word: &[(usize, bool)], xs: &[QMatrix]) -> Result<Q> {
    if !space.family().is_formed() {
        return Err(Error::Unsupported { op: "trace_monomial", family: space.family().name().into() });
    }
    let n = space.dim();
    let mut prod = QMatrix::identity(&Rationals, n);
    for &(i, star) in word {
        let x = xs.get(i.wrapping_sub(1)).ok_or_else(|| Error::Index(format!("word index {i} outside 1..={}", xs.len())))?;
        let u = if star { space.iota(x)? } else { x.clone() };
        prod = prod.mul(&u);
    }
    Ok(if word.is_empty() { Q::from_integer((n as i64).into()) } else { prod.trace() })
}
