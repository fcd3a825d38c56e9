//! Deterministic instance generation.

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumprod_core::fp::{FpSet, PrimeCtx};
use sumprod_core::rational::parse_set;
use sumprod_core::{ExactSet, Rational};
use thiserror::Error;

use crate::config::SetSpec;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("generated set would have {size} elements, above the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("invalid generator: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] sumprod_core::Error),
}

/// Seeded stream for input `index` of a run with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_cap(size: usize, cap: usize) -> Result<(), GenError> {
    if size > cap {
        return Err(GenError::TooLarge { size, cap });
    }
    Ok(())
}

/// Builds the set described by `spec`. Random sets draw from the stream
/// `(seed, index)` unless the spec pins its own seed.
pub fn generate(spec: &SetSpec, seed: u64, index: u64, cap: usize) -> Result<ExactSet, GenError> {
    match spec {
        SetSpec::Literal { values } => {
            check_cap(values.len(), cap)?;
            Ok(values.clone())
        }
        SetSpec::Ap { start, step, n } => {
            check_cap(*n, cap)?;
            if *step == 0 && *n > 1 {
                return Err(GenError::Invalid("progression step must be nonzero".into()));
            }
            let n = *n as i64;
            let terms = (0..n)
                .map(|i| step.checked_mul(i).and_then(|v| v.checked_add(*start)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| GenError::Invalid("progression overflows i64".into()))?;
            Ok(ExactSet::from_ints(terms))
        }
        SetSpec::Geometric { n } => {
            check_cap(*n as usize, cap)?;
            if *n > 200 {
                return Err(GenError::Invalid("geometric n above 200".into()));
            }
            let two = Rational::from_integer(2.into());
            let mut cur = Rational::one();
            Ok((0..*n)
                .map(|_| {
                    cur = &cur * &two;
                    cur.clone()
                })
                .collect())
        }
        SetSpec::ConvexSquares { n } => {
            check_cap(*n, cap)?;
            Ok(ExactSet::from_ints((1..=*n as i64).map(|i| i * i)))
        }
        SetSpec::Random { size, lo, hi, seed: own } => {
            check_cap(*size, cap)?;
            if lo > hi {
                return Err(GenError::Invalid(format!("empty range [{lo}, {hi}]")));
            }
            let width = (*hi as i128 - *lo as i128 + 1) as u128;
            if (*size as u128) > width || width > usize::MAX as u128 {
                return Err(GenError::Invalid(format!("{size} distinct values do not fit [{lo}, {hi}]")));
            }
            let mut rng = match own {
                Some(s) => rng_for(*s, 0),
                None => rng_for(seed, index),
            };
            let picks = sample(&mut rng, width as usize, *size);
            Ok(ExactSet::from_ints(picks.into_iter().map(|i| lo + i as i64)))
        }
        SetSpec::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| GenError::Io { path: path.display().to_string(), source })?;
            let set = parse_set(&text)?;
            check_cap(set.len(), cap)?;
            Ok(set)
        }
    }
}

/// Reduces a rational set into `𝔽_p`; denominators must be invertible.
pub fn to_fp(set: &ExactSet, p: u64) -> Result<FpSet, GenError> {
    let ctx = PrimeCtx::new(p)?;
    let modp = |v: &num_bigint::BigInt| -> u64 {
        let r = v % num_bigint::BigInt::from(p);
        let r = if r < num_bigint::BigInt::zero() { r + p } else { r };
        r.to_u64().expect("residue below p")
    };
    let mut out = FpSet::empty(&ctx);
    for q in set {
        let den = modp(q.denom());
        if den == 0 {
            return Err(GenError::Invalid(format!("denominator of {q} vanishes mod {p}")));
        }
        out.insert(ctx.mul(modp(q.numer()), ctx.inv(den)));
    }
    Ok(out)
}
