//! Bag-of-n encoding: the count vector of n consecutive tokens from a
//! uniformly sampled window, padded to the model's input width.

use crate::error::{Error, Result};
use crate::tensor::{Scalar, Tensor};
use rand::Rng;

/// Batch of bag count vectors, one window per row, each row summing to n.
pub fn sample_bags<S: Scalar, R: Rng + ?Sized>(
    stream: &[u32],
    n: usize,
    batch: usize,
    width: usize,
    rng: &mut R,
) -> Result<Tensor<S>> {
    if stream.len() < n {
        return Err(Error::invalid(
            "sample_bags",
            format!("stream length {} shorter than window {}", stream.len(), n),
        ));
    }
    if n == 0 || batch == 0 {
        return Err(Error::invalid("sample_bags", "window and batch must be positive"));
    }
    let starts = stream.len() - n + 1;
    let mut data = vec![S::zero(); batch * width];
    for row in 0..batch {
        let s = rng.random_range(0..starts);
        for &tok in &stream[s..s + n] {
            let tok = tok as usize;
            if tok >= width {
                return Err(Error::invalid(
                    "sample_bags",
                    format!("token id {} exceeds input width {}", tok, width),
                ));
            }
            data[row * width + tok] += S::one();
        }
    }
    Tensor::from_vec(&[batch, width], data)
}

/// Single bag with count n at one symbol: the probe used to read a
/// symbol mapping out of a trained model.
pub fn one_symbol_bag<S: Scalar>(symbol: u32, n: usize, width: usize) -> Tensor<S> {
    let mut data = vec![S::zero(); width];
    data[symbol as usize] = S::from_f64(n as f64);
    Tensor::from_vec(&[width], data).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn window_of_one_gives_one_hot_rows() {
        let stream = vec![0u32, 3, 1, 2, 3];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bags: Tensor<f32> = sample_bags(&stream, 1, 32, 4, &mut rng).unwrap();
        for row in bags.data().chunks_exact(4) {
            assert_eq!(row.iter().sum::<f32>(), 1.0);
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
        }
    }

    #[test]
    fn hand_counted_window() {
        // stream "aaab", n=3: the only windows are [aaa] and [aab].
        let stream = vec![0u32, 0, 0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bags: Tensor<f64> = sample_bags(&stream, 3, 16, 2, &mut rng).unwrap();
        for row in bags.data().chunks_exact(2) {
            assert!(row == [3.0, 0.0] || row == [2.0, 1.0], "unexpected bag {:?}", row);
        }
    }

    #[test]
    fn every_row_sums_to_n() {
        let stream: Vec<u32> = (0..500).map(|i| (i * 7 + 3) % 23).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let bags: Tensor<f32> = sample_bags(&stream, 10, 100, 30, &mut rng).unwrap();
            for row in bags.data().chunks_exact(30) {
                assert_eq!(row.iter().sum::<f32>(), 10.0);
            }
        }
    }

    #[test]
    fn short_stream_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_bags::<f32, _>(&[1, 2], 3, 1, 4, &mut rng).is_err());
    }
}
