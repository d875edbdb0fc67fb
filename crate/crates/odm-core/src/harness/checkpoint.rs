//! Checkpoint container: magic "ODM1", a descriptor table, raw
//! little-endian f32 payloads in declared order, and a trailing FNV-1a
//! checksum over the payload bytes. Parameters round-trip bit-exactly;
//! compute precision above f32 is truncated on save by design.

use super::config::fnv1a64;
use crate::error::{Error, Result};
use crate::tensor::Tensor;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: [u8; 4] = *b"ODM1";
const VERSION: u32 = 1;
const DTYPE_F32: u8 = 0;

pub fn save_checkpoint(path: &Path, params: &[(String, Tensor<f32>)]) -> Result<()> {
    let mut header = Vec::new();
    header.extend_from_slice(&MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    header.extend_from_slice(&(params.len() as u32).to_le_bytes());
    for (name, t) in params {
        let name_bytes = name.as_bytes();
        if name_bytes.len() > u16::MAX as usize {
            return Err(Error::Checkpoint(format!("parameter name too long: {}", name)));
        }
        header.extend_from_slice(&(name_bytes.len() as u16).to_le_bytes());
        header.extend_from_slice(name_bytes);
        header.push(DTYPE_F32);
        header.push(t.shape().len() as u8);
        for &d in t.shape() {
            header.extend_from_slice(&(d as u32).to_le_bytes());
        }
    }
    let mut payload = Vec::new();
    for (_, t) in params {
        for &v in t.data() {
            payload.extend_from_slice(&v.to_le_bytes());
        }
    }
    let checksum = fnv1a64(&payload);

    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(&header).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(&payload).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(&checksum.to_le_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Vec<(String, Tensor<f32>)>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut pos = 0usize;
    let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
        if *pos + n > bytes.len() {
            return Err(Error::Checkpoint("truncated file".into()));
        }
        let s = &bytes[*pos..*pos + n];
        *pos += n;
        Ok(s)
    };

    if take(&mut pos, 4)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "format version {} not supported (expected {})",
            version, VERSION
        )));
    }
    let count = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
    let mut descriptors = Vec::with_capacity(count);
    for _ in 0..count {
        let name_len = u16::from_le_bytes(take(&mut pos, 2)?.try_into().unwrap()) as usize;
        let name = String::from_utf8(take(&mut pos, name_len)?.to_vec())
            .map_err(|_| Error::Checkpoint("non-utf8 parameter name".into()))?;
        let dtype = take(&mut pos, 1)?[0];
        if dtype != DTYPE_F32 {
            return Err(Error::Checkpoint(format!("unknown dtype {}", dtype)));
        }
        let ndim = take(&mut pos, 1)?[0] as usize;
        let mut shape = Vec::with_capacity(ndim);
        for _ in 0..ndim {
            shape.push(u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize);
        }
        descriptors.push((name, shape));
    }

    let payload_len: usize =
        descriptors.iter().map(|(_, s)| s.iter().product::<usize>() * 4).sum();
    let payload = take(&mut pos, payload_len)?.to_vec();
    let stored = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
    if pos != bytes.len() {
        return Err(Error::Checkpoint("trailing bytes after checksum".into()));
    }
    if fnv1a64(&payload) != stored {
        return Err(Error::Checkpoint("checksum mismatch".into()));
    }

    let mut out = Vec::with_capacity(count);
    let mut offset = 0usize;
    for (name, shape) in descriptors {
        let n: usize = shape.iter().product();
        let data: Vec<f32> = payload[offset..offset + n * 4]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        offset += n * 4;
        out.push((name, Tensor::from_vec(&shape, data)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Vec<(String, Tensor<f32>)> {
        vec![
            ("w0".into(), Tensor::from_vec(&[2, 3], vec![1.5, -0.25, 3.75, 0.0, 1e-20, 42.0]).unwrap()),
            ("b0".into(), Tensor::from_vec(&[3], vec![0.1, 0.2, 0.3]).unwrap()),
        ]
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.ckpt");
        let p2 = dir.path().join("b.ckpt");
        save_checkpoint(&p1, &params()).unwrap();
        let loaded = load_checkpoint(&p1).unwrap();
        assert_eq!(loaded, params());
        save_checkpoint(&p2, &loaded).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn flipped_payload_byte_fails_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.ckpt");
        save_checkpoint(&p, &params()).unwrap();
        let mut bytes = std::fs::read(&p).unwrap();
        let idx = bytes.len() - 12; // inside the payload, before the checksum
        bytes[idx] ^= 0x40;
        std::fs::write(&p, &bytes).unwrap();
        let err = load_checkpoint(&p).unwrap_err();
        assert!(err.to_string().contains("checksum"), "{}", err);
    }

    #[test]
    fn version_mismatch_refuses_to_load() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.ckpt");
        save_checkpoint(&p, &params()).unwrap();
        let mut bytes = std::fs::read(&p).unwrap();
        bytes[4] = 9;
        std::fs::write(&p, &bytes).unwrap();
        let err = load_checkpoint(&p).unwrap_err();
        assert!(err.to_string().contains("version"), "{}", err);
    }

    #[test]
    fn empty_model_is_a_valid_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.ckpt");
        save_checkpoint(&p, &[]).unwrap();
        assert_eq!(load_checkpoint(&p).unwrap(), Vec::new());
    }

    #[test]
    fn truncation_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.ckpt");
        save_checkpoint(&p, &params()).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        std::fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
        assert!(load_checkpoint(&p).is_err());
    }
}
