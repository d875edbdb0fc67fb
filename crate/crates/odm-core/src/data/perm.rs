//! Fixed pixel permutation applied uniformly to every image: the hidden
//! correspondence for the permutation task.

use super::mnist::IMAGE_PIXELS;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct PermutationTask {
    perm: Vec<u32>,
    pub seed: u64,
}

impl PermutationTask {
    /// Fisher–Yates shuffle of the 784 pixel indices from a seeded rng.
    pub fn new(seed: u64) -> Self {
        let mut perm: Vec<u32> = (0..IMAGE_PIXELS as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        perm.shuffle(&mut rng);
        PermutationTask { perm, seed }
    }

    pub fn identity() -> Self {
        PermutationTask { perm: (0..IMAGE_PIXELS as u32).collect(), seed: 0 }
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// permuted[i] = image[perm[i]]
    pub fn apply(&self, image: &[f32]) -> Vec<f32> {
        assert_eq!(image.len(), IMAGE_PIXELS);
        self.perm.iter().map(|&p| image[p as usize]).collect()
    }

    pub fn inverse(&self) -> PermutationTask {
        let mut inv = vec![0u32; IMAGE_PIXELS];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        PermutationTask { perm: inv, seed: self.seed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> Vec<f32> {
        (0..IMAGE_PIXELS).map(|i| i as f32 / IMAGE_PIXELS as f32).collect()
    }

    #[test]
    fn perm_is_a_bijection() {
        let t = PermutationTask::new(42);
        let mut seen = vec![false; IMAGE_PIXELS];
        for &p in t.perm() {
            assert!(!seen[p as usize]);
            seen[p as usize] = true;
        }
    }

    #[test]
    fn inverse_undoes_apply() {
        let t = PermutationTask::new(7);
        let img = ramp();
        let back = t.inverse().apply(&t.apply(&img));
        assert_eq!(back, img);
    }

    #[test]
    fn identity_leaves_image_unchanged() {
        let img = ramp();
        assert_eq!(PermutationTask::identity().apply(&img), img);
    }

    #[test]
    fn pixel_multiset_is_preserved() {
        let t = PermutationTask::new(99);
        let img = ramp();
        let mut a = img.clone();
        let mut b = t.apply(&img);
        a.sort_by(f32::total_cmp);
        b.sort_by(f32::total_cmp);
        assert_eq!(a, b);
    }
}
