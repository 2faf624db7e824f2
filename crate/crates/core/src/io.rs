//! Little-endian binary formats.
//!
//! | format | header (all u32 LE after the magic)            | payload (f32 LE)          |
//! |--------|-----------------------------------------------|---------------------------|
//! | `RADC` | magic, version, R, A, D                       | R·A·D × (re, im), r→a→d   |
//! | `POSE` | magic, version, frames, J                     | frames × J × (x, y, z) mm |
//! | `PRNW` | magic, version, C, H1, H2, D_out              | W1 b1 W2 b2 W3 b3, row-major |
//!
//! Several `RADC` records may be concatenated in one file; see
//! [`read_cubes`].

use std::io::{self, Read, Write};

use num_complex::Complex32;

use crate::error::{Error, Result};
use crate::regressor::{MlpShape, MlpWeights};
use crate::tensor::{CubeDims, Pose, RadCube};

pub const CUBE_MAGIC: [u8; 4] = *b"RADC";
pub const POSE_MAGIC: [u8; 4] = *b"POSE";
pub const WEIGHTS_MAGIC: [u8; 4] = *b"PRNW";
pub const FORMAT_VERSION: u32 = 1;

/// Largest element count accepted from a header (2^31 values).
const MAX_ELEMENTS: u64 = 1 << 31;

fn read_exact_or_truncated<R: Read>(src: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    src.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::TruncatedPayload(what.to_string()),
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(src: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact_or_truncated(src, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

fn check_magic(found: [u8; 4], expected: [u8; 4]) -> Result<()> {
    if found != expected {
        return Err(Error::BadMagic { expected, found });
    }
    Ok(())
}

fn read_version<R: Read>(src: &mut R) -> Result<()> {
    match read_u32(src, "version")? {
        FORMAT_VERSION => Ok(()),
        v => Err(Error::UnsupportedVersion(v)),
    }
}

fn element_count(dims: &[u32], per_element: u64) -> Result<usize> {
    let count = dims
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
        .and_then(|n| n.checked_mul(per_element))
        .filter(|&n| n <= MAX_ELEMENTS)
        .ok_or_else(|| Error::DimensionOverflow(format!("{dims:?}")))?;
    Ok(count as usize)
}

fn read_f32s<R: Read>(src: &mut R, count: usize, what: &str) -> Result<Vec<f32>> {
    let mut bytes = vec![0u8; count * 4];
    read_exact_or_truncated(src, &mut bytes, what)?;
    Ok(bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect())
}

fn header_u32(value: usize) -> Result<[u8; 4]> {
    u32::try_from(value)
        .map(u32::to_le_bytes)
        .map_err(|_| Error::DimensionOverflow(value.to_string()))
}

pub fn write_cube<W: Write>(cube: &RadCube, sink: &mut W) -> Result<()> {
    let dims = cube.dims();
    let mut buf = Vec::with_capacity(20 + dims.len() * 8);
    buf.extend_from_slice(&CUBE_MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for d in [dims.range, dims.angle, dims.doppler] {
        buf.extend_from_slice(&header_u32(d)?);
    }
    for z in cube.data() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    sink.write_all(&buf)?;
    Ok(())
}

fn read_cube_after_magic<R: Read>(source: &mut R) -> Result<RadCube> {
    read_version(source)?;
    let r = read_u32(source, "range dimension")?;
    let a = read_u32(source, "angle dimension")?;
    let d = read_u32(source, "doppler dimension")?;
    let count = element_count(&[r, a, d], 2)?;
    let values = read_f32s(source, count, "cube payload")?;
    let data = values
        .chunks_exact(2)
        .map(|p| Complex32::new(p[0], p[1]))
        .collect();
    RadCube::from_vec(CubeDims::new(r as usize, a as usize, d as usize), data)
}

pub fn read_cube<R: Read>(source: &mut R) -> Result<RadCube> {
    let mut magic = [0u8; 4];
    read_exact_or_truncated(source, &mut magic, "magic")?;
    check_magic(magic, CUBE_MAGIC)?;
    read_cube_after_magic(source)
}

/// Reads concatenated `RADC` records until a clean end of stream.
pub fn read_cubes<R: Read>(source: &mut R) -> Result<Vec<RadCube>> {
    let mut cubes = Vec::new();
    loop {
        let mut magic = [0u8; 4];
        let mut filled = 0;
        while filled < 4 {
            match source.read(&mut magic[filled..]) {
                Ok(0) => break,
                Ok(n) => filled += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e.into()),
            }
        }
        match filled {
            0 => return Ok(cubes),
            4 => {
                check_magic(magic, CUBE_MAGIC)?;
                cubes.push(read_cube_after_magic(source)?);
            }
            _ => return Err(Error::TruncatedPayload("magic".into())),
        }
    }
}

pub fn write_pose_set<W: Write>(poses: &[Pose], sink: &mut W) -> Result<()> {
    let joints = poses.first().map_or(0, Pose::num_joints);
    if let Some(p) = poses.iter().find(|p| p.num_joints() != joints) {
        return Err(crate::error::mismatch(joints, p.num_joints()));
    }
    let mut buf = Vec::with_capacity(20 + poses.len() * joints * 12);
    buf.extend_from_slice(&POSE_MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&header_u32(poses.len())?);
    buf.extend_from_slice(&header_u32(joints)?);
    for v in poses.iter().flat_map(|p| p.joints().iter().flatten()) {
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    sink.write_all(&buf)?;
    Ok(())
}

pub fn read_pose_set<R: Read>(source: &mut R) -> Result<Vec<Pose>> {
    let mut magic = [0u8; 4];
    read_exact_or_truncated(source, &mut magic, "magic")?;
    check_magic(magic, POSE_MAGIC)?;
    read_version(source)?;
    let frames = read_u32(source, "frame count")?;
    let joints = read_u32(source, "joint count")?;
    let count = element_count(&[frames, joints], 3)?;
    let values = read_f32s(source, count, "pose payload")?;
    if frames == 0 {
        return Ok(Vec::new());
    }
    if joints == 0 {
        return Err(Error::InvalidArgument("pose set with zero joints".into()));
    }
    values
        .chunks_exact(joints as usize * 3)
        .map(|frame| Pose::from_flat(&frame.iter().map(|&v| v as f64).collect::<Vec<_>>()))
        .collect()
}

pub fn write_weights<W: Write>(weights: &MlpWeights, sink: &mut W) -> Result<()> {
    let s = weights.shape();
    let mut buf = Vec::with_capacity(24 + weights.param_count() * 4);
    buf.extend_from_slice(&WEIGHTS_MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for d in [s.input, s.hidden1, s.hidden2, s.output] {
        buf.extend_from_slice(&header_u32(d)?);
    }
    for v in weights.tensors().into_iter().flatten() {
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    sink.write_all(&buf)?;
    Ok(())
}

pub fn read_weights<R: Read>(source: &mut R) -> Result<MlpWeights> {
    let mut magic = [0u8; 4];
    read_exact_or_truncated(source, &mut magic, "magic")?;
    check_magic(magic, WEIGHTS_MAGIC)?;
    read_version(source)?;
    let mut dims = [0u32; 4];
    for (d, name) in dims.iter_mut().zip(["C", "H1", "H2", "D_out"]) {
        *d = read_u32(source, name)?;
    }
    let shape = MlpShape::new(
        dims[0] as usize,
        dims[1] as usize,
        dims[2] as usize,
        dims[3] as usize,
    )?;
    let count = crate::regressor::param_count(&shape);
    if count > MAX_ELEMENTS {
        return Err(Error::DimensionOverflow(format!("{dims:?}")));
    }
    let values = read_f32s(source, count as usize, "weight payload")?;
    MlpWeights::from_flat(shape, values.into_iter().map(f64::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_cube_layout() {
        let cube = RadCube::from_vec(CubeDims::new(1, 1, 1), vec![Complex32::new(1.0, -2.0)]).unwrap();
        let mut bytes = Vec::new();
        write_cube(&cube, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 28);
        assert_eq!(&bytes[..4], b"RADC");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[20..24], &1.0f32.to_le_bytes());
        assert_eq!(&bytes[24..28], &(-2.0f32).to_le_bytes());
        assert_eq!(read_cube(&mut bytes.as_slice()).unwrap(), cube);
    }

    #[test]
    fn bad_magic_and_truncation() {
        let cube = RadCube::zeros(CubeDims::new(2, 2, 2));
        let mut bytes = Vec::new();
        write_cube(&cube, &mut bytes).unwrap();
        let mut bad = bytes.clone();
        bad[..4].copy_from_slice(b"XXXX");
        assert!(matches!(read_cube(&mut bad.as_slice()), Err(Error::BadMagic { .. })));
        let short = &bytes[..bytes.len() - 1];
        assert!(matches!(read_cube(&mut &short[..]), Err(Error::TruncatedPayload(_))));
        let mut huge = bytes.clone();
        huge[8..20].copy_from_slice(&[0xff; 12]);
        assert!(matches!(read_cube(&mut huge.as_slice()), Err(Error::DimensionOverflow(_))));
        let mut version = bytes;
        version[4] = 9;
        assert!(matches!(read_cube(&mut version.as_slice()), Err(Error::UnsupportedVersion(9))));
    }

    #[test]
    fn concatenated_cubes() {
        let a = RadCube::zeros(CubeDims::new(1, 2, 2));
        let b = RadCube::from_vec(CubeDims::new(1, 1, 1), vec![Complex32::new(3.0, 0.5)]).unwrap();
        let mut bytes = Vec::new();
        write_cube(&a, &mut bytes).unwrap();
        write_cube(&b, &mut bytes).unwrap();
        assert_eq!(read_cubes(&mut bytes.as_slice()).unwrap(), vec![a, b]);
        bytes.extend_from_slice(b"RA");
        assert!(read_cubes(&mut bytes.as_slice()).is_err());
    }

    #[test]
    fn pose_layout_and_truncation() {
        let pose = Pose::new(vec![[0.0, 0.0, 0.0]]).unwrap();
        let mut bytes = Vec::new();
        write_pose_set(&[pose.clone()], &mut bytes).unwrap();
        assert_eq!(bytes.len(), 28);
        assert_eq!(read_pose_set(&mut bytes.as_slice()).unwrap(), vec![pose]);
        bytes[8..12].copy_from_slice(&2u32.to_le_bytes());
        assert!(matches!(
            read_pose_set(&mut bytes.as_slice()),
            Err(Error::TruncatedPayload(_))
        ));
    }

    #[test]
    fn weights_round_trip() {
        let shape = MlpShape::new(3, 4, 5, 6).unwrap();
        let w = MlpWeights::init(shape, 1).quantized();
        let mut bytes = Vec::new();
        write_weights(&w, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 24 + 4 * w.param_count());
        assert_eq!(read_weights(&mut bytes.as_slice()).unwrap(), w);
    }
}
