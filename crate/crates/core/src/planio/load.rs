use image::{ColorType, ImageFormat};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::planio::{OpeningKind, OpeningSymbol};
use crate::raster::{BinaryMask, GrayImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskFormat {
    Pgm,
    Png,
}

impl MaskFormat {
    /// Guesses from leading magic bytes.
    pub fn sniff(bytes: &[u8]) -> Option<Self> {
        if bytes.starts_with(b"P5") {
            Some(MaskFormat::Pgm)
        } else if bytes.starts_with(PNG_SIGNATURE) {
            Some(MaskFormat::Png)
        } else {
            None
        }
    }
}

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Luminance threshold; pixels strictly brighter are foreground.
pub const FOREGROUND_THRESHOLD: u8 = 127;

pub fn load_mask(bytes: &[u8], format: MaskFormat) -> Result<BinaryMask> {
    Ok(load_gray(bytes, format)?.threshold(FOREGROUND_THRESHOLD))
}

pub fn load_gray(bytes: &[u8], format: MaskFormat) -> Result<GrayImage> {
    match format {
        MaskFormat::Pgm => parse_pgm(bytes),
        MaskFormat::Png => parse_png(bytes),
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Binary (P5) PGM with maxval ≤ 255.
fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if !bytes.starts_with(b"P5") {
        return Err(parse_err(0, "missing P5 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(parse_err(pos, "truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(parse_err(pos, "expected a decimal number"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(start, "header number out of range"))?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(parse_err(pos, format!("invalid maxval {maxval}")));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedFormat(format!(
            "16-bit PGM (maxval {maxval})"
        )));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(parse_err(pos, "expected whitespace after maxval"));
    }
    pos += 1;
    let need = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(0, "image dimensions overflow"))?;
    let data = &bytes[pos..];
    if data.len() < need {
        return Err(parse_err(
            bytes.len(),
            format!("truncated pixel data: need {need} bytes, have {}", data.len()),
        ));
    }
    let scale = |v: u8| -> u8 {
        if maxval == 255 {
            v
        } else {
            ((v as usize * 255 + maxval / 2) / maxval).min(255) as u8
        }
    };
    Ok(GrayImage::from_vec(
        width,
        height,
        data[..need].iter().map(|&v| scale(v)).collect(),
    ))
}

/// Walks the chunk layout so malformed files report where they break, then
/// hands the bytes to the PNG decoder.
fn check_png_chunks(bytes: &[u8]) -> Result<()> {
    if !bytes.starts_with(PNG_SIGNATURE) {
        return Err(parse_err(0, "missing PNG signature"));
    }
    let mut pos = PNG_SIGNATURE.len();
    loop {
        if pos + 8 > bytes.len() {
            return Err(parse_err(pos, "truncated chunk header"));
        }
        let len = u32::from_be_bytes(bytes[pos..pos + 4].try_into().unwrap()) as usize;
        let kind = &bytes[pos + 4..pos + 8];
        let end = pos + 12 + len;
        if end > bytes.len() {
            return Err(parse_err(
                pos,
                format!("chunk {} overruns the file", String::from_utf8_lossy(kind)),
            ));
        }
        if kind == b"IEND" {
            return Ok(());
        }
        pos = end;
    }
}

fn parse_png(bytes: &[u8]) -> Result<GrayImage> {
    check_png_chunks(bytes)?;
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| parse_err(0, format!("png decode: {e}")))?;
    match img.color() {
        ColorType::L8 | ColorType::La8 | ColorType::Rgb8 | ColorType::Rgba8 => {}
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "PNG color type {other:?}; 8-bit channels required"
            )))
        }
    }
    let luma = img.to_luma8();
    let (w, h) = luma.dimensions();
    Ok(GrayImage::from_vec(w as usize, h as usize, luma.into_raw()))
}

/// Binary P5 PGM encoding, 255 for foreground.
pub fn encode_pgm(mask: &BinaryMask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.data().iter().map(|&b| if b { 255u8 } else { 0 }));
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbol {
    kind: String,
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    confidence: Option<f64>,
}

/// Parses the symbol list `[{kind, x, y, w, h, confidence?}, ...]`.
pub fn load_symbols(bytes: &[u8]) -> Result<Vec<OpeningSymbol>> {
    let values: Vec<serde_json::Value> = serde_json::from_slice(bytes)?;
    values
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            let err = |message: String| Error::Symbol { index, message };
            let raw: RawSymbol = serde_json::from_value(v).map_err(|e| err(e.to_string()))?;
            let kind = match raw.kind.as_str() {
                "door" => OpeningKind::Door,
                "window" => OpeningKind::Window,
                other => return Err(err(format!("unknown kind {other:?}"))),
            };
            let confidence = raw.confidence.unwrap_or(1.0);
            let sym = OpeningSymbol {
                kind,
                x: raw.x,
                y: raw.y,
                w: raw.w,
                h: raw.h,
                confidence,
            };
            sym.validate().map_err(err)?;
            Ok(sym)
        })
        .collect()
}
