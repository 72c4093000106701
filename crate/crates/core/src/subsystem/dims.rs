use crate::error::{Error, Result};

/// Dimension of the permutation-group irrep paired with total spin `J` on
/// `n` spin-1/2 sites: `(2J+1) n! / ((n/2 + J + 1)! (n/2 - J)!)`.
///
/// `J` is passed as `twice_j = 2J`, which must satisfy `twice_j <= n` and
/// `n - twice_j` even.
pub fn symmetric_subsystem_dim(n: u32, twice_j: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("need at least one site".into()));
    }
    if twice_j > n || !(n - twice_j).is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "J = {}/2 is not an allowed total spin for {n} sites",
            twice_j
        )));
    }
    let lower = (n - twice_j) / 2; // n/2 - J
    let upper = (n + twice_j) / 2; // n/2 + J
                                   // n! / ((n/2+J)! (n/2-J)!) = C(n, n/2-J); the extra factor (n/2+J+1) divides out exactly.
    let overflow = || Error::Size(format!("dimension for n = {n} overflows u128"));
    let mut binom: u128 = 1;
    for k in 0..lower {
        binom = binom.checked_mul(u128::from(n - k)).ok_or_else(overflow)? / u128::from(k + 1);
    }
    let numer = binom
        .checked_mul(u128::from(twice_j + 1))
        .ok_or_else(overflow)?;
    let denom = u128::from(upper + 1);
    debug_assert_eq!(numer % denom, 0);
    u64::try_from(numer / denom).map_err(|_| overflow())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: multiplicity of spin J among n spin-1/2 is the
    /// number of weight-(n/2-J) strings minus the number of weight-(n/2-J-1) ones.
    fn weight_count_oracle(n: u32, twice_j: u32) -> u64 {
        fn binom(n: u64, k: u64) -> u64 {
            (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
        }
        let k = u64::from((n - twice_j) / 2);
        let n = u64::from(n);
        binom(n, k) - if k == 0 { 0 } else { binom(n, k - 1) }
    }

    #[test]
    fn four_site_values() {
        assert_eq!(symmetric_subsystem_dim(4, 0).unwrap(), 2);
        assert_eq!(symmetric_subsystem_dim(4, 2).unwrap(), 3);
        assert_eq!(symmetric_subsystem_dim(4, 4).unwrap(), 1);
    }

    #[test]
    fn two_site_triplet_is_one_dimensional() {
        // 3 * 2! / (3! * 0!) = 1
        assert_eq!(symmetric_subsystem_dim(2, 2).unwrap(), 1);
        assert_eq!(symmetric_subsystem_dim(2, 0).unwrap(), 1);
    }

    #[test]
    fn agrees_with_weight_counting() {
        for n in 1..=40u32 {
            for twice_j in (n % 2..=n).step_by(2) {
                assert_eq!(
                    symmetric_subsystem_dim(n, twice_j).unwrap(),
                    weight_count_oracle(n, twice_j),
                    "n={n} 2J={twice_j}"
                );
            }
        }
    }

    #[test]
    fn dimensions_fill_hilbert_space() {
        // sum_J (2J+1) dim(D_J) = 2^n
        for n in 1..=20u32 {
            let total: u64 = (n % 2..=n)
                .step_by(2)
                .map(|t| u64::from(t + 1) * symmetric_subsystem_dim(n, t).unwrap())
                .sum();
            assert_eq!(total, 1u64 << n);
        }
    }

    #[test]
    fn rejects_invalid_spin() {
        assert!(matches!(
            symmetric_subsystem_dim(4, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            symmetric_subsystem_dim(4, 6),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            symmetric_subsystem_dim(0, 0),
            Err(Error::Precondition(_))
        ));
    }
}
