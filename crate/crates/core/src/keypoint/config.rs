use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::keypoints::KEYPOINT_COUNT;
use crate::nn::{infer_output_shape, LayerSpec};

/// Architecture of a keypoint regressor.
///
/// `conv_schedule` lists only convolution and pooling stages; a relu is
/// inserted after every convolution and every hidden dense layer, and the
/// output layer is linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelConfig {
    /// Side of the square grayscale input, pixels.
    pub input_size: usize,
    pub conv_schedule: Vec<LayerSpec>,
    /// Hidden dense widths; the output layer is appended.
    pub fc_schedule: Vec<usize>,
    pub output_count: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// 227x227 input, 14 convolutions, 4 dense layers.
    Paper,
    /// 96x96 input, 4 convolutions, 2 dense layers; trains on a CPU in minutes.
    Desk,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(Error::config(format!("unknown preset {other:?} (expected paper or desk)"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        })
    }
}

fn conv3(in_channels: usize, out_channels: usize) -> LayerSpec {
    LayerSpec::conv(in_channels, out_channels, 3, 1, 1)
}

const POOL: LayerSpec = LayerSpec::MaxPool { size: 2, stride: 2 };

impl ModelConfig {
    pub fn preset(preset: Preset, seed: u64) -> Self {
        match preset {
            Preset::Paper => Self::paper(seed),
            Preset::Desk => Self::desk(seed),
        }
    }

    /// Four blocks of 3x3 convolutions (32, 64, 128, 256 channels; 3, 3, 4
    /// and 4 layers), each followed by 2x2 max pooling, then dense layers of
    /// 1024, 512, 256 and 40 units.
    pub fn paper(seed: u64) -> Self {
        let mut conv = Vec::new();
        let mut c_in = 1;
        for (width, count) in [(32, 3), (64, 3), (128, 4), (256, 4)] {
            for _ in 0..count {
                conv.push(conv3(c_in, width));
                c_in = width;
            }
            conv.push(POOL);
        }
        Self {
            input_size: 227,
            conv_schedule: conv,
            fc_schedule: vec![1024, 512, 256],
            output_count: 2 * KEYPOINT_COUNT,
            seed,
        }
    }

    pub fn desk(seed: u64) -> Self {
        Self {
            input_size: 96,
            conv_schedule: vec![
                conv3(1, 8),
                POOL,
                conv3(8, 16),
                POOL,
                conv3(16, 24),
                POOL,
                conv3(24, 32),
                POOL,
            ],
            fc_schedule: vec![128],
            output_count: 2 * KEYPOINT_COUNT,
            seed,
        }
    }

    pub fn conv_count(&self) -> usize {
        self.conv_schedule
            .iter()
            .filter(|l| matches!(l, LayerSpec::Conv { .. }))
            .count()
    }

    pub fn dense_count(&self) -> usize {
        self.fc_schedule.len() + 1
    }

    pub fn input_shape(&self) -> [usize; 3] {
        [1, self.input_size, self.input_size]
    }

    /// Full layer list, with activations and the output layer filled in.
    pub fn layer_specs(&self) -> Result<Vec<LayerSpec>> {
        if self.output_count != 2 * KEYPOINT_COUNT {
            return Err(Error::config(format!(
                "output_count must be {} (two coordinates per keypoint), got {}",
                2 * KEYPOINT_COUNT,
                self.output_count
            )));
        }
        let mut specs = Vec::new();
        for spec in &self.conv_schedule {
            match spec {
                LayerSpec::Conv { .. } => specs.extend([*spec, LayerSpec::Relu]),
                LayerSpec::MaxPool { .. } => specs.push(*spec),
                other => {
                    return Err(Error::config(format!(
                        "conv schedule may hold only conv and maxpool stages, found {other:?}"
                    )))
                }
            }
        }
        let flat: usize = infer_output_shape(&self.input_shape(), &specs)?.iter().product();
        specs.push(LayerSpec::Flatten);
        let mut width = flat;
        for &units in &self.fc_schedule {
            specs.extend([LayerSpec::dense(width, units), LayerSpec::Relu]);
            width = units;
        }
        specs.push(LayerSpec::dense(width, self.output_count));
        let out = infer_output_shape(&self.input_shape(), &specs)?;
        debug_assert_eq!(out, vec![self.output_count]);
        Ok(specs)
    }

    /// `conv 1 8 3 1 1; pool 2 2; ...`
    pub fn conv_schedule_text(&self) -> String {
        self.conv_schedule
            .iter()
            .map(|s| match *s {
                LayerSpec::Conv {
                    in_channels,
                    out_channels,
                    kernel,
                    stride,
                    padding,
                } => format!("conv {in_channels} {out_channels} {kernel} {stride} {padding}"),
                LayerSpec::MaxPool { size, stride } => format!("pool {size} {stride}"),
                other => format!("{other:?}"),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn parse_conv_schedule(text: &str) -> Result<Vec<LayerSpec>> {
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|stage| {
                let parts: Vec<&str> = stage.split_whitespace().collect();
                let nums: Vec<usize> = parts[1..]
                    .iter()
                    .map(|p| p.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::config(format!("bad layer stage {stage:?}")))?;
                match (parts[0], &nums[..]) {
                    ("conv", &[i, o, k, s, p]) => Ok(LayerSpec::conv(i, o, k, s, p)),
                    ("pool", &[size, stride]) => Ok(LayerSpec::MaxPool { size, stride }),
                    _ => Err(Error::config(format!("bad layer stage {stage:?}"))),
                }
            })
            .collect()
    }
}
