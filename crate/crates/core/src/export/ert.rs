//! `.ert` tensor container.
//!
//! ```text
//! offset  size      field
//! 0       4         magic "ERT1"
//! 4       1         version (1)
//! 5       1         dtype: 0 = u8, 1 = u16, 2 = u32, 3 = f32
//! 6       1         ndim (3)
//! 7       1         reserved (0)
//! 8       4 * ndim  dims, little-endian u32 (C, H, W)
//! ...               payload, row-major (last dim fastest), little-endian
//! ```

use crate::error::{Error, Result};
use crate::repr::{Layout, RepTensor};

pub const ERT_MAGIC: [u8; 4] = *b"ERT1";
pub const ERT_VERSION: u8 = 1;
const FIXED_HEADER: usize = 8;
const NDIM: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dtype {
    U8,
    U16,
    U32,
    F32,
}

impl Dtype {
    pub fn code(self) -> u8 {
        match self {
            Dtype::U8 => 0,
            Dtype::U16 => 1,
            Dtype::U32 => 2,
            Dtype::F32 => 3,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Dtype::U8),
            1 => Ok(Dtype::U16),
            2 => Ok(Dtype::U32),
            3 => Ok(Dtype::F32),
            other => Err(Error::UnknownDtype(other)),
        }
    }

    pub fn size(self) -> usize {
        match self {
            Dtype::U8 => 1,
            Dtype::U16 => 2,
            Dtype::U32 | Dtype::F32 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dtype::U8 => "u8",
            Dtype::U16 => "u16",
            Dtype::U32 => "u32",
            Dtype::F32 => "f32",
        }
    }

    fn integer_max(self) -> Option<f64> {
        match self {
            Dtype::U8 => Some(u8::MAX as f64),
            Dtype::U16 => Some(u16::MAX as f64),
            Dtype::U32 => Some(u32::MAX as f64),
            Dtype::F32 => None,
        }
    }
}

impl std::str::FromStr for Dtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u8" => Ok(Dtype::U8),
            "u16" => Ok(Dtype::U16),
            "u32" => Ok(Dtype::U32),
            "f32" => Ok(Dtype::F32),
            other => Err(Error::InvalidArgument(format!("unknown dtype {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErtHeader {
    pub dtype: Dtype,
    pub dims: [u32; 3],
}

impl ErtHeader {
    pub fn header_len(&self) -> usize {
        FIXED_HEADER + 4 * self.dims.len()
    }

    pub fn payload_len(&self) -> usize {
        self.dims.iter().map(|&d| d as usize).product::<usize>() * self.dtype.size()
    }
}

pub fn write_tensor(tensor: &RepTensor, dtype: Dtype) -> Result<Vec<u8>> {
    let (c, h, w) = tensor.shape();
    let dims = [c, h, w].map(|d| u32::try_from(d).unwrap_or(u32::MAX));
    if dims.contains(&0) || [c, h, w].iter().any(|&d| d > u32::MAX as usize) {
        return Err(Error::EmptyDims(dims.to_vec()));
    }
    let mut out = Vec::with_capacity(FIXED_HEADER + 12 + tensor.data().len() * dtype.size());
    out.extend_from_slice(&ERT_MAGIC);
    out.extend_from_slice(&[ERT_VERSION, dtype.code(), NDIM, 0]);
    for d in dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
    let Some(max) = dtype.integer_max() else {
        for v in tensor.data() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        return Ok(out);
    };
    for (i, &v) in tensor.data().iter().enumerate() {
        let wide = v as f64;
        if !(v.is_finite() && v.fract() == 0.0 && (0.0..=max).contains(&wide)) {
            return Err(Error::DtypeRange {
                channel: i / (h * w),
                y: i / w % h,
                x: i % w,
                value: v,
                dtype: dtype.name(),
            });
        }
        match dtype {
            Dtype::U8 => out.push(wide as u8),
            Dtype::U16 => out.extend_from_slice(&(wide as u16).to_le_bytes()),
            Dtype::U32 => out.extend_from_slice(&(wide as u32).to_le_bytes()),
            Dtype::F32 => unreachable!(),
        }
    }
    Ok(out)
}

pub fn read_header(bytes: &[u8]) -> Result<ErtHeader> {
    if bytes.len() < FIXED_HEADER {
        return Err(Error::Truncated {
            expected: FIXED_HEADER,
            found: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("length checked");
    if magic != ERT_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes[4] != ERT_VERSION {
        return Err(Error::UnsupportedVersion(bytes[4]));
    }
    let dtype = Dtype::from_code(bytes[5])?;
    let ndim = bytes[6];
    if ndim != NDIM {
        return Err(Error::BadNdim(ndim));
    }
    let header_len = FIXED_HEADER + 4 * ndim as usize;
    if bytes.len() < header_len {
        return Err(Error::Truncated {
            expected: header_len,
            found: bytes.len(),
        });
    }
    let mut dims = [0u32; 3];
    for (d, chunk) in dims.iter_mut().zip(bytes[FIXED_HEADER..header_len].chunks_exact(4)) {
        *d = u32::from_le_bytes(chunk.try_into().expect("chunk of 4"));
    }
    if dims.contains(&0) {
        return Err(Error::EmptyDims(dims.to_vec()));
    }
    Ok(ErtHeader { dtype, dims })
}

/// Decodes a tensor. The returned layout is [`Layout::unknown`], since the
/// container stores no representation metadata.
pub fn read_tensor(bytes: &[u8]) -> Result<RepTensor> {
    let header = read_header(bytes)?;
    let start = header.header_len();
    let expected = start + header.payload_len();
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::TrailingBytes(bytes.len() - expected));
    }
    let payload = &bytes[start..];
    let data: Vec<f32> = match header.dtype {
        Dtype::U8 => payload.iter().map(|&b| b as f32).collect(),
        Dtype::U16 => payload
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as f32)
            .collect(),
        Dtype::U32 => payload
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f32)
            .collect(),
        Dtype::F32 => payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect(),
    };
    let [c, h, w] = header.dims.map(|d| d as usize);
    RepTensor::from_vec(c, h, w, data, Layout::unknown())
}
