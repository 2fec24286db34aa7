use std::path::Path;

use super::grid::read_grid;
use super::handle::SetHandle;
use super::point::Point2;
use super::polar::{PolarSet2D, RadialProfile};
use crate::error::{Error, Result};

fn num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidParameter(format!("bad {what} '{s}'")))
}

/// Parses `segment:L`, `disk:R`, `ellipse:a,b`, `polar:a0;a1,b1;...` or
/// `gridfile:PATH,level`, optionally followed by `!c` for the complement.
pub fn parse_set(text: &str) -> Result<SetHandle<f64>> {
    let text = text.trim();
    let (body, complemented) = match text.strip_suffix("!c") {
        Some(b) => (b, true),
        None => (text, false),
    };
    let (tag, args) = body
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter(format!("set '{text}' lacks a 'kind:' prefix")))?;
    let origin = Point2::new(0.0, 0.0);
    let handle = match tag {
        "segment" => SetHandle::segment(num(args, "segment length")?)?,
        "disk" => SetHandle::polar(PolarSet2D::disk(origin, num(args, "radius")?)?),
        "ellipse" => {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| Error::InvalidParameter("ellipse needs a,b".into()))?;
            SetHandle::polar(PolarSet2D::ellipse(origin, num(a, "semi-axis")?, num(b, "semi-axis")?)?)
        }
        "polar" => {
            let mut parts = args.split(';');
            let a0 = num(parts.next().unwrap_or(""), "a0")?;
            let mut harmonics = Vec::new();
            for p in parts {
                let (a, b) = p
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidParameter(format!("harmonic '{p}' needs a,b")))?;
                harmonics.push((num(a, "coefficient")?, num(b, "coefficient")?));
            }
            SetHandle::polar(PolarSet2D::new(origin, RadialProfile { a0, harmonics, ellipse: None })?)
        }
        "gridfile" => {
            let (path, level) = args
                .rsplit_once(',')
                .ok_or_else(|| Error::InvalidParameter("gridfile needs PATH,level".into()))?;
            SetHandle::grid(read_grid(Path::new(path))?, num(level, "level")?)?
        }
        other => return Err(Error::InvalidParameter(format!("unknown set kind '{other}'"))),
    };
    Ok(if complemented { handle.complement() } else { handle })
}
