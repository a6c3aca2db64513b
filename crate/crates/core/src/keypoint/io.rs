//! Model files.
//!
//! ```text
//! "DFRM"                      4 bytes
//! format version              u16 LE
//! metadata length             u32 LE
//! metadata                    UTF-8 `key = value` lines (the model config and history)
//! per parameter array, in declaration order:
//!     element count           u64 LE
//!     values                  f32 LE
//! ```

use std::io::{Read, Write};
use std::path::Path;

use super::config::ModelConfig;
use super::model::{EpochLoss, KeypointModel};
use crate::config::parse_key_values;
use crate::error::{Error, Result};
use crate::nn::{Network, Tensor};

pub const MODEL_MAGIC: &[u8; 4] = b"DFRM";
pub const MODEL_FORMAT_VERSION: u16 = 1;

fn metadata(model: &KeypointModel) -> String {
    let c = &model.config;
    let fc: Vec<String> = c.fc_schedule.iter().map(ToString::to_string).collect();
    let history: Vec<String> = model
        .history
        .iter()
        .map(|h| format!("{}:{}", h.epoch, h.loss))
        .collect();
    format!(
        "input_size = {}\noutput_count = {}\nseed = {}\nconv = {}\nfc = {}\nhistory = {}\n",
        c.input_size,
        c.output_count,
        c.seed,
        c.conv_schedule_text(),
        fc.join(","),
        history.join(",")
    )
}

pub fn write_model<W: Write>(model: &KeypointModel, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::format("output", e.to_string());
    let meta = metadata(model);
    out.write_all(MODEL_MAGIC).map_err(io)?;
    out.write_all(&MODEL_FORMAT_VERSION.to_le_bytes()).map_err(io)?;
    out.write_all(&(meta.len() as u32).to_le_bytes()).map_err(io)?;
    out.write_all(meta.as_bytes()).map_err(io)?;
    for p in model.network.params() {
        out.write_all(&(p.len() as u64).to_le_bytes()).map_err(io)?;
        let mut buf = Vec::with_capacity(p.len() * 4);
        for v in p.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf).map_err(io)?;
    }
    out.flush().map_err(io)
}

fn read_exact<R: Read>(r: &mut R, n: usize, section: &str) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; n];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format(section, format!("truncated: expected {n} more bytes")))?;
    Ok(buf)
}

fn parse_metadata(text: &str) -> Result<(ModelConfig, Vec<EpochLoss>)> {
    let bad = |m: String| Error::format("metadata", m);
    let kv = parse_key_values(text).map_err(|e| bad(e.to_string()))?;
    let get = |k: &str| kv.get(k).ok_or_else(|| bad(format!("missing key {k:?}")));
    let int = |k: &str| -> Result<u64> { get(k)?.parse().map_err(|_| bad(format!("{k} is not an integer"))) };
    let fc = get("fc")?
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| bad(format!("bad dense width {s:?}"))))
        .collect::<Result<Vec<usize>>>()?;
    let history = get("history")?
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (e, l) = s.split_once(':').ok_or_else(|| bad(format!("bad history entry {s:?}")))?;
            Ok(EpochLoss {
                epoch: e.trim().parse().map_err(|_| bad(format!("bad epoch {e:?}")))?,
                loss: l.trim().parse().map_err(|_| bad(format!("bad loss {l:?}")))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = ModelConfig {
        input_size: int("input_size")? as usize,
        conv_schedule: ModelConfig::parse_conv_schedule(get("conv")?).map_err(|e| bad(e.to_string()))?,
        fc_schedule: fc,
        output_count: int("output_count")? as usize,
        seed: int("seed")?,
    };
    Ok((config, history))
}

/// Reads a model. Nothing is returned unless every section validates.
pub fn read_model<R: Read>(mut input: R) -> Result<KeypointModel> {
    let head = read_exact(&mut input, 6, "header")?;
    if &head[..4] != MODEL_MAGIC {
        return Err(Error::format("header", format!("bad magic {:?}, expected \"DFRM\"", &head[..4])));
    }
    let version = u16::from_le_bytes([head[4], head[5]]);
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::format(
            "header",
            format!("unsupported model format version {version} (this build reads version {MODEL_FORMAT_VERSION})"),
        ));
    }
    let len = u32::from_le_bytes(read_exact(&mut input, 4, "metadata")?.try_into().expect("4 bytes")) as usize;
    let meta = String::from_utf8(read_exact(&mut input, len, "metadata")?)
        .map_err(|_| Error::format("metadata", "not valid UTF-8"))?;
    let (config, history) = parse_metadata(&meta)?;
    let specs = config.layer_specs().map_err(|e| Error::format("metadata", e.to_string()))?;

    let mut params = Vec::new();
    for (i, shape) in specs.iter().flat_map(|s| s.param_shapes()).enumerate() {
        let section = format!("parameter array {i}");
        let count = u64::from_le_bytes(read_exact(&mut input, 8, &section)?.try_into().expect("8 bytes")) as usize;
        let expected: usize = shape.iter().product();
        if count != expected {
            return Err(Error::format(
                &section,
                format!("holds {count} values, the configuration needs {expected}"),
            ));
        }
        let raw = read_exact(&mut input, count * 4, &section)?;
        let data = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")))
            .collect();
        params.push(Tensor::new(shape, data)?);
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest).map_err(|e| Error::format("trailer", e.to_string()))? != 0 {
        return Err(Error::format("trailer", "unexpected bytes after the last parameter array"));
    }
    let network = Network::from_params(&config.input_shape(), &specs, params)?;
    Ok(KeypointModel {
        config,
        network,
        history,
    })
}

pub fn save_model(model: &KeypointModel, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_model(model, std::io::BufWriter::new(f))
}

pub fn load_model(path: &Path) -> Result<KeypointModel> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(std::io::BufReader::new(f))
}
