//! IDX container reader/writer for 28×28 grayscale digit sets. Big-endian
//! headers, magic 0x00000803 (u8 images, 3 dims) and 0x00000801 (u8
//! labels, 1 dim), pixels scaled to [0,1] on load.

use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

pub const IMAGE_SIDE: usize = 28;
pub const IMAGE_PIXELS: usize = IMAGE_SIDE * IMAGE_SIDE;

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone)]
pub struct MnistSet {
    images: Vec<f32>,
    labels: Vec<u8>,
}

impl MnistSet {
    pub fn new(images: Vec<f32>, labels: Vec<u8>) -> Result<Self> {
        if images.len() != labels.len() * IMAGE_PIXELS {
            return Err(Error::invalid(
                "mnist_set",
                format!("{} pixels for {} labels", images.len(), labels.len()),
            ));
        }
        if images.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("mnist_set", "pixel outside [0,1]"));
        }
        if labels.iter().any(|&l| l > 9) {
            return Err(Error::invalid("mnist_set", "label out of range"));
        }
        Ok(MnistSet { images, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn image(&self, i: usize) -> &[f32] {
        &self.images[i * IMAGE_PIXELS..(i + 1) * IMAGE_PIXELS]
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Indices of every image of each digit class.
    pub fn class_index(&self) -> Vec<Vec<u32>> {
        let mut by_class: Vec<Vec<u32>> = vec![Vec::new(); 10];
        for (i, &l) in self.labels.iter().enumerate() {
            by_class[l as usize].push(i as u32);
        }
        by_class
    }
}

fn read_u32_be(r: &mut impl Read, path: &Path) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(u32::from_be_bytes(buf))
}

pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<MnistSet> {
    let bad = |path: &Path, detail: String| Error::BadData {
        path: path.display().to_string(),
        detail,
    };

    let mut f = std::fs::File::open(images_path)
        .map_err(|e| Error::io(images_path.display().to_string(), e))?;
    let magic = read_u32_be(&mut f, images_path)?;
    if magic != IMAGES_MAGIC {
        return Err(bad(images_path, format!("bad magic 0x{:08x}", magic)));
    }
    let count = read_u32_be(&mut f, images_path)? as usize;
    let rows = read_u32_be(&mut f, images_path)? as usize;
    let cols = read_u32_be(&mut f, images_path)? as usize;
    if rows != IMAGE_SIDE || cols != IMAGE_SIDE {
        return Err(bad(images_path, format!("expected 28x28 images, got {}x{}", rows, cols)));
    }
    let mut pixels = vec![0u8; count * IMAGE_PIXELS];
    f.read_exact(&mut pixels)
        .map_err(|_| bad(images_path, "truncated image payload".into()))?;

    let mut f = std::fs::File::open(labels_path)
        .map_err(|e| Error::io(labels_path.display().to_string(), e))?;
    let magic = read_u32_be(&mut f, labels_path)?;
    if magic != LABELS_MAGIC {
        return Err(bad(labels_path, format!("bad magic 0x{:08x}", magic)));
    }
    let label_count = read_u32_be(&mut f, labels_path)? as usize;
    if label_count != count {
        return Err(bad(
            labels_path,
            format!("{} labels for {} images", label_count, count),
        ));
    }
    let mut labels = vec![0u8; label_count];
    f.read_exact(&mut labels)
        .map_err(|_| bad(labels_path, "truncated label payload".into()))?;
    if let Some(&l) = labels.iter().find(|&&l| l > 9) {
        return Err(bad(labels_path, format!("label out of range: {}", l)));
    }

    let images: Vec<f32> = pixels.iter().map(|&b| b as f32 / 255.0).collect();
    MnistSet::new(images, labels)
}

/// Write a set as an IDX pair. Pixels are quantized to bytes, so a
/// round-trip is bit-exact only for byte-aligned intensities.
pub fn write_idx(images_path: &Path, labels_path: &Path, set: &MnistSet) -> Result<()> {
    let count = set.len() as u32;

    let mut f = std::fs::File::create(images_path)
        .map_err(|e| Error::io(images_path.display().to_string(), e))?;
    let mut header = Vec::with_capacity(16);
    header.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    header.extend_from_slice(&count.to_be_bytes());
    header.extend_from_slice(&(IMAGE_SIDE as u32).to_be_bytes());
    header.extend_from_slice(&(IMAGE_SIDE as u32).to_be_bytes());
    f.write_all(&header).map_err(|e| Error::io(images_path.display().to_string(), e))?;
    let bytes: Vec<u8> =
        set.images.iter().map(|&p| (p * 255.0).round().clamp(0.0, 255.0) as u8).collect();
    f.write_all(&bytes).map_err(|e| Error::io(images_path.display().to_string(), e))?;

    let mut f = std::fs::File::create(labels_path)
        .map_err(|e| Error::io(labels_path.display().to_string(), e))?;
    let mut header = Vec::with_capacity(8);
    header.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    header.extend_from_slice(&count.to_be_bytes());
    f.write_all(&header).map_err(|e| Error::io(labels_path.display().to_string(), e))?;
    f.write_all(&set.labels).map_err(|e| Error::io(labels_path.display().to_string(), e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> MnistSet {
        // Two images built byte-by-byte: a gradient and a checker corner.
        let mut images = vec![0.0f32; 2 * IMAGE_PIXELS];
        for i in 0..IMAGE_PIXELS {
            images[i] = (i % 256) as f32 / 255.0;
        }
        images[IMAGE_PIXELS] = 1.0;
        images[IMAGE_PIXELS + 29] = 128.0 / 255.0;
        MnistSet::new(images, vec![7, 0]).unwrap()
    }

    #[test]
    fn round_trip_preserves_shapes_and_exact_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let ip = dir.path().join("images-idx3-ubyte");
        let lp = dir.path().join("labels-idx1-ubyte");
        let set = fixture();
        write_idx(&ip, &lp, &set).unwrap();
        let loaded = load_idx(&ip, &lp).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded.label(0), 7);
        assert_eq!(loaded.label(1), 0);
        // All fixture intensities are byte-aligned, so equality is exact.
        assert_eq!(loaded.image(0), set.image(0));
        assert_eq!(loaded.image(1), set.image(1));
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let ip = dir.path().join("img");
        let lp = dir.path().join("lab");
        let set = fixture();
        write_idx(&ip, &lp, &set).unwrap();
        let mut bytes = std::fs::read(&ip).unwrap();
        bytes[3] = 0x00;
        std::fs::write(&ip, &bytes).unwrap();
        let err = load_idx(&ip, &lp).unwrap_err();
        assert!(err.to_string().contains("bad magic"), "{}", err);
    }

    #[test]
    fn out_of_range_label_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let ip = dir.path().join("img");
        let lp = dir.path().join("lab");
        write_idx(&ip, &lp, &fixture()).unwrap();
        let mut bytes = std::fs::read(&lp).unwrap();
        let last = bytes.len() - 1;
        bytes[last] = 10;
        std::fs::write(&lp, &bytes).unwrap();
        let err = load_idx(&ip, &lp).unwrap_err();
        assert!(err.to_string().contains("label out of range"), "{}", err);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let ip = dir.path().join("img");
        let lp = dir.path().join("lab");
        write_idx(&ip, &lp, &fixture()).unwrap();
        let bytes = std::fs::read(&ip).unwrap();
        std::fs::write(&ip, &bytes[..bytes.len() - 10]).unwrap();
        assert!(load_idx(&ip, &lp).is_err());
    }

    #[test]
    fn count_mismatch_between_files_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let ip = dir.path().join("img");
        let lp = dir.path().join("lab");
        let other_lp = dir.path().join("lab1");
        write_idx(&ip, &lp, &fixture()).unwrap();
        // Single-image label file against the two-image image file.
        let one = MnistSet::new(fixture().image(0).to_vec(), vec![3]).unwrap();
        write_idx(&dir.path().join("img1"), &other_lp, &one).unwrap();
        assert!(load_idx(&ip, &other_lp).is_err());
    }
}
