//! Image ingestion and result emission.
//!
//! Inputs: PGM (`P2`, `P5`) and PPM (`P3`, `P6`) with maxval at most 255,
//! plus the `LIPF` text format for exact real-valued images:
//!
//! ```text
//! LIPF <width> <height> <M>
//! <width*height whitespace-separated reals, row-major>
//! ```
//!
//! 8-bit inputs keep their integer values as tones under `M = 256`. Color
//! inputs are reduced to BT.601 luma without rounding.
//!
//! Outputs: binary PGM masks, binary PPM overlays, LIPF or rounded PGM
//! images, and a flat JSON statistics record.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::IoError;
use crate::grower::GrowthResult;
use crate::image::{GrayImage, Point};
use crate::lip::GrayScale;
use crate::region::{CriterionConfig, Region};

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Reads any supported input format, dispatching on the magic bytes.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage, IoError> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })?;
    decode_image(&data, path)
}

/// Decodes an in-memory image; `path` is only used in error messages.
pub fn decode_image(data: &[u8], path: &Path) -> Result<GrayImage, IoError> {
    if data.starts_with(b"LIPF") {
        return decode_lipf(data, path);
    }
    match data.get(..2) {
        Some(b"P2") => decode_pnm(data, path, Channels::Gray, Encoding::Ascii),
        Some(b"P5") => decode_pnm(data, path, Channels::Gray, Encoding::Binary),
        Some(b"P3") => decode_pnm(data, path, Channels::Rgb, Encoding::Ascii),
        Some(b"P6") => decode_pnm(data, path, Channels::Rgb, Encoding::Binary),
        _ => Err(IoError::UnknownFormat {
            path: path.to_owned(),
        }),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Channels {
    Gray,
    Rgb,
}

#[derive(Clone, Copy, PartialEq)]
enum Encoding {
    Ascii,
    Binary,
}

/// Whitespace/comment-aware tokenizer over a PNM byte stream.
struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }
}

fn malformed(path: &Path, reason: impl Into<String>) -> IoError {
    IoError::Malformed {
        path: path.to_owned(),
        reason: reason.into(),
    }
}

fn parse_token<T: std::str::FromStr>(
    tokens: &mut Tokens<'_>,
    path: &Path,
    what: &str,
) -> Result<T, IoError> {
    let tok = tokens.next_token().ok_or_else(|| IoError::Truncated {
        path: path.to_owned(),
    })?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            malformed(
                path,
                format!("bad {what} {:?}", String::from_utf8_lossy(tok)),
            )
        })
}

fn decode_pnm(
    data: &[u8],
    path: &Path,
    channels: Channels,
    encoding: Encoding,
) -> Result<GrayImage, IoError> {
    let mut tokens = Tokens { data, pos: 2 };
    let width: usize = parse_token(&mut tokens, path, "width")?;
    let height: usize = parse_token(&mut tokens, path, "height")?;
    let maxval: u32 = parse_token(&mut tokens, path, "maxval")?;
    if maxval == 0 {
        return Err(malformed(path, "maxval must be positive"));
    }
    if maxval > 255 {
        return Err(IoError::UnsupportedDepth {
            path: path.to_owned(),
            maxval,
        });
    }
    let n_channels = match channels {
        Channels::Gray => 1,
        Channels::Rgb => 3,
    };
    let n_samples = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(n_channels))
        .ok_or_else(|| malformed(path, "dimensions overflow"))?;

    let samples: Vec<u8> = match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates the header from the raster
            let start = tokens.pos + 1;
            let raster = data
                .get(start..)
                .and_then(|r| r.get(..n_samples))
                .ok_or_else(|| IoError::Truncated {
                    path: path.to_owned(),
                })?;
            raster.to_vec()
        }
        Encoding::Ascii => {
            let mut out = Vec::with_capacity(n_samples);
            for _ in 0..n_samples {
                let v: u32 = parse_token(&mut tokens, path, "sample")?;
                if v > maxval {
                    return Err(malformed(
                        path,
                        format!("sample {v} exceeds maxval {maxval}"),
                    ));
                }
                out.push(v as u8);
            }
            out
        }
    };
    if encoding == Encoding::Binary && samples.iter().any(|&s| u32::from(s) > maxval) {
        return Err(malformed(path, format!("sample exceeds maxval {maxval}")));
    }

    let pixels = match channels {
        Channels::Gray => samples.iter().map(|&s| f64::from(s)).collect(),
        Channels::Rgb => samples
            .chunks_exact(3)
            .map(|c| luma(c[0], c[1], c[2]))
            .collect(),
    };
    GrayImage::new(width, height, GrayScale::EIGHT_BIT, pixels).map_err(|source| IoError::Image {
        path: path.to_owned(),
        source,
    })
}

/// BT.601 luma of an 8-bit RGB triple, unrounded and capped below 256.
pub fn luma(r: u8, g: u8, b: u8) -> f64 {
    let y = LUMA_R * f64::from(r) + LUMA_G * f64::from(g) + LUMA_B * f64::from(b);
    // the weights sum to 1, so white lands on 255 up to rounding
    y.min(255.0)
}

fn decode_lipf(data: &[u8], path: &Path) -> Result<GrayImage, IoError> {
    let text = std::str::from_utf8(data).map_err(|_| malformed(path, "LIPF is not UTF-8"))?;
    let mut fields = text.split_ascii_whitespace().skip(1);
    let mut next = |what: &str| {
        fields
            .next()
            .ok_or_else(|| IoError::Truncated {
                path: path.to_owned(),
            })
            .map(|s| (what.to_owned(), s))
    };
    let parse_dim = |(what, s): (String, &str)| {
        s.parse::<usize>()
            .map_err(|_| malformed(path, format!("bad {what} {s:?}")))
    };
    let parse_real = |(what, s): (String, &str)| {
        s.parse::<f64>()
            .map_err(|_| malformed(path, format!("bad {what} {s:?}")))
    };
    let width = parse_dim(next("width")?)?;
    let height = parse_dim(next("height")?)?;
    let bound = parse_real(next("bound")?)?;
    let scale = GrayScale::new(bound).map_err(|e| IoError::Image {
        path: path.to_owned(),
        source: e.into(),
    })?;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| malformed(path, "dimensions overflow"))?;
    let mut pixels = Vec::with_capacity(n);
    for _ in 0..n {
        pixels.push(parse_real(next("value")?)?);
    }
    if next("trailing").is_ok() {
        return Err(malformed(path, "trailing data after pixel values"));
    }
    GrayImage::new(width, height, scale, pixels).map_err(|source| IoError::Image {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, IoError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|source| IoError::Io {
            path: path.to_owned(),
            source,
        })
}

fn write_all(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let mut w = create(path)?;
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|source| IoError::Io {
            path: path.to_owned(),
            source,
        })
}

/// Rounds a tone to the nearest byte, saturating at 255.
fn to_byte(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// LIPF encoding; values use the shortest representation that parses back
/// to the same `f64`.
pub fn encode_lipf(img: &GrayImage) -> String {
    let mut out = format!(
        "LIPF {} {} {:?}\n",
        img.width(),
        img.height(),
        img.scale().bound()
    );
    for row in img.pixels().chunks(img.width()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_lipf(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_all(path.as_ref(), encode_lipf(img).as_bytes())
}

fn pgm_bytes(width: usize, height: usize, samples: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(samples);
    out
}

/// Binary PGM with every tone rounded to the nearest byte.
pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), IoError> {
    let bytes = pgm_bytes(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&v| to_byte(v)),
    );
    write_all(path.as_ref(), &bytes)
}

/// Binary PGM mask: members 255, everything else 0.
pub fn write_mask(region: &Region, path: impl AsRef<Path>) -> Result<(), IoError> {
    let bytes = pgm_bytes(
        region.width(),
        region.height(),
        region
            .to_mask()
            .into_iter()
            .map(|m| if m { 255 } else { 0 }),
    );
    write_all(path.as_ref(), &bytes)
}

/// Reads a mask image: nonzero pixels are members.
pub fn read_mask(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<bool>), IoError> {
    let img = read_image(path)?;
    let mask = img.pixels().iter().map(|&v| v != 0.0).collect();
    Ok((img.width(), img.height(), mask))
}

/// Half-extent of the seed marker: the cross spans 5 pixels each way.
const CROSS_ARM: usize = 2;

/// RGB overlay as binary PPM.
///
/// Background is the rounded gray tone, members are blended half-way toward
/// pure red, and a red cross marks the seed.
pub fn encode_overlay(img: &GrayImage, region: &Region, seed: Point) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let mut rgb = Vec::with_capacity(w * h * 3);
    for (i, &v) in img.pixels().iter().enumerate() {
        let p = img.point_of(i);
        let on_cross = (p.y == seed.y && p.x.abs_diff(seed.x) <= CROSS_ARM)
            || (p.x == seed.x && p.y.abs_diff(seed.y) <= CROSS_ARM);
        let px = if on_cross {
            [255, 0, 0]
        } else if region.contains(p) {
            [
                to_byte((v + 255.0) / 2.0),
                to_byte(v / 2.0),
                to_byte(v / 2.0),
            ]
        } else {
            let g = to_byte(v);
            [g, g, g]
        };
        rgb.extend_from_slice(&px);
    }
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.extend(rgb);
    out
}

pub fn write_overlay(
    img: &GrayImage,
    region: &Region,
    seed: Point,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_all(path.as_ref(), &encode_overlay(img, region, seed))
}

/// Flat summary of a growth run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationStats {
    /// `[column, row]`.
    pub seed: [usize; 2],
    pub criterion: String,
    pub threshold: f64,
    pub iterations: usize,
    pub region_size: usize,
    #[serde(with = "real_or_inf")]
    pub final_heterogeneity: f64,
    pub termination: String,
}

impl SegmentationStats {
    pub fn from_result(result: &GrowthResult, crit: &CriterionConfig) -> Self {
        Self {
            seed: [result.seed.x, result.seed.y],
            criterion: crit.kind().name().to_owned(),
            threshold: crit.threshold(),
            iterations: result.iterations,
            region_size: result.region.len(),
            final_heterogeneity: result.final_heterogeneity,
            termination: result.termination.name().to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats always serialize")
    }
}

pub fn write_stats(stats: &SegmentationStats, path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut text = stats.to_json();
    text.push('\n');
    write_all(path.as_ref(), text.as_bytes())
}

pub fn read_stats(path: impl AsRef<Path>) -> Result<SegmentationStats, IoError> {
    let path = path.as_ref();
    let text = fs::read(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_slice(&text).map_err(|source| IoError::Json {
        path: PathBuf::from(path),
        source,
    })
}

/// Serializes `+inf` as the string `"inf"`, finite values as numbers.
pub mod real_or_inf {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected number or \"inf\", got {s:?}"
            ))),
        }
    }

    /// Plain JSON value for ad-hoc objects.
    pub fn to_value(v: f64) -> serde_json::Value {
        if v == f64::INFINITY {
            serde_json::Value::from("inf")
        } else {
            serde_json::Value::from(v)
        }
    }
}
