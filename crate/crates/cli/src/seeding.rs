//! Deterministic per-trial seed derivation.
//!
//! Trial i of a run with master seed m uses
//! `splitmix64(m + (i + 1) * GOLDEN)`, so any trial's seed is a pure
//! function of (m, i) and results never depend on execution order or the
//! number of workers. The constants are pinned by tests.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 output mix.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_pinned() {
        // frozen values: any change to the derivation breaks reproducibility
        assert_eq!(trial_seed(0, 0), splitmix64(GOLDEN));
        assert_eq!(trial_seed(0, 0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(trial_seed(42, 0), 0xbdd7_3226_2feb_6e95);
        assert_eq!(trial_seed(42, 99), 0x39fe_ecac_1eb4_a198);
        assert_ne!(trial_seed(42, 0), trial_seed(42, 1));
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
        // independence of order: seed for index 7 needs no other index
        let direct = trial_seed(99, 7);
        let seq: Vec<u64> = (0..10).map(|i| trial_seed(99, i)).collect();
        assert_eq!(seq[7], direct);
    }
}
