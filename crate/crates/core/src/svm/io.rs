//! SVM files. All integers and floats little-endian.
//!
//! ```text
//! "DFRS"                          4 bytes
//! format version                  u16
//! feature schema version          u32
//! kernel                          u8 (0 linear, 1 rbf)
//! gamma, C, tolerance             f64 x 3
//! max_passes, seed                u64 x 2
//! dimension d                     u32
//! means, scales                   f64 x d each
//! class count k                   u32
//! classes                         u32 x k
//! pair count                      u32
//! per pair:
//!     positive, negative label    u32 x 2
//!     bias                        f64
//!     support vector count s      u32
//!     per support vector: coefficient f64, then d f64 values
//! ```

use std::io::{Read, Write};
use std::path::Path;

use super::kernel::Kernel;
use super::model::{PairMachine, Standardizer, SvmModel, SvmParams};
use crate::error::{Error, Result};

pub const SVM_MAGIC: &[u8; 4] = b"DFRS";
pub const SVM_FORMAT_VERSION: u16 = 1;

pub fn write_svm<W: Write>(model: &SvmModel, mut out: W) -> Result<()> {
    let mut b = Vec::new();
    b.extend_from_slice(SVM_MAGIC);
    b.extend_from_slice(&SVM_FORMAT_VERSION.to_le_bytes());
    b.extend_from_slice(&model.schema_version.to_le_bytes());
    let (kind, gamma) = match model.kernel {
        Kernel::Linear => (0u8, 0.0),
        Kernel::Rbf { gamma } => (1u8, gamma),
    };
    b.push(kind);
    for v in [gamma, model.params.c, model.params.tolerance] {
        b.extend_from_slice(&v.to_le_bytes());
    }
    b.extend_from_slice(&(model.params.max_passes as u64).to_le_bytes());
    b.extend_from_slice(&model.params.seed.to_le_bytes());
    b.extend_from_slice(&(model.dimension() as u32).to_le_bytes());
    for v in model.standardizer.mean.iter().chain(&model.standardizer.scale) {
        b.extend_from_slice(&v.to_le_bytes());
    }
    b.extend_from_slice(&(model.classes.len() as u32).to_le_bytes());
    for c in &model.classes {
        b.extend_from_slice(&c.to_le_bytes());
    }
    b.extend_from_slice(&(model.machines.len() as u32).to_le_bytes());
    for m in &model.machines {
        b.extend_from_slice(&m.positive.to_le_bytes());
        b.extend_from_slice(&m.negative.to_le_bytes());
        b.extend_from_slice(&m.bias.to_le_bytes());
        b.extend_from_slice(&(m.coefficients.len() as u32).to_le_bytes());
        for (c, sv) in m.coefficients.iter().zip(&m.support_vectors) {
            b.extend_from_slice(&c.to_le_bytes());
            for v in sv {
                b.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    out.write_all(&b).map_err(|e| Error::format("output", e.to_string()))?;
    out.flush().map_err(|e| Error::format("output", e.to_string()))
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, section: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::format(section, format!("truncated: expected {n} more bytes")));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, section: &str) -> Result<u8> {
        Ok(self.take(1, section)?[0])
    }

    fn u32(&mut self, section: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, section)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self, section: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, section)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self, section: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, section)?.try_into().expect("8 bytes")))
    }

    fn f64s(&mut self, n: usize, section: &str) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64(section)).collect()
    }
}

pub fn read_svm<R: Read>(mut input: R) -> Result<SvmModel> {
    let mut buf = Vec::new();
    input
        .read_to_end(&mut buf)
        .map_err(|e| Error::format("header", e.to_string()))?;
    let mut c = Cursor { buf: &buf, pos: 0 };
    let magic = c.take(4, "header")?;
    if magic != SVM_MAGIC {
        return Err(Error::format("header", format!("bad magic {magic:?}, expected \"DFRS\"")));
    }
    let version = u16::from_le_bytes(c.take(2, "header")?.try_into().expect("2 bytes"));
    if version != SVM_FORMAT_VERSION {
        return Err(Error::format(
            "header",
            format!("unsupported svm format version {version} (this build reads version {SVM_FORMAT_VERSION})"),
        ));
    }
    let schema_version = c.u32("header")?;
    let kernel = match c.u8("parameters")? {
        0 => {
            c.f64("parameters")?;
            Kernel::Linear
        }
        1 => Kernel::Rbf { gamma: c.f64("parameters")? },
        k => return Err(Error::format("parameters", format!("unknown kernel code {k}"))),
    };
    let params = SvmParams {
        kernel: kernel.kind(),
        c: c.f64("parameters")?,
        gamma: match kernel {
            Kernel::Rbf { gamma } => Some(gamma),
            Kernel::Linear => None,
        },
        tolerance: c.f64("parameters")?,
        max_passes: c.u64("parameters")? as usize,
        seed: c.u64("parameters")?,
    };
    let d = c.u32("normalization")? as usize;
    let mean = c.f64s(d, "normalization")?;
    let scale = c.f64s(d, "normalization")?;
    let k = c.u32("classes")? as usize;
    let classes = (0..k).map(|_| c.u32("classes")).collect::<Result<Vec<_>>>()?;
    if classes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::format("classes", "labels are not strictly increasing"));
    }
    let pairs = c.u32("pairs")? as usize;
    if pairs != k * k.saturating_sub(1) / 2 {
        return Err(Error::format("pairs", format!("{pairs} pairs for {k} classes")));
    }
    let mut machines = Vec::with_capacity(pairs);
    for p in 0..pairs {
        let section = format!("pair {p}");
        let positive = c.u32(&section)?;
        let negative = c.u32(&section)?;
        if classes.binary_search(&positive).is_err() || classes.binary_search(&negative).is_err() {
            return Err(Error::format(&section, "pair labels are not model classes"));
        }
        let bias = c.f64(&section)?;
        let s = c.u32(&section)? as usize;
        let mut coefficients = Vec::with_capacity(s);
        let mut support_vectors = Vec::with_capacity(s);
        for _ in 0..s {
            coefficients.push(c.f64(&section)?);
            support_vectors.push(c.f64s(d, &section)?);
        }
        machines.push(PairMachine {
            positive,
            negative,
            support_vectors,
            coefficients,
            bias,
        });
    }
    if c.pos != buf.len() {
        return Err(Error::format("trailer", "unexpected bytes after the last pair"));
    }
    Ok(SvmModel {
        params,
        kernel,
        standardizer: Standardizer { mean, scale },
        classes,
        machines,
        schema_version,
    })
}

pub fn save_svm(model: &SvmModel, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_svm(model, std::io::BufWriter::new(f))
}

pub fn load_svm(path: &Path) -> Result<SvmModel> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_svm(std::io::BufReader::new(f))
}
