//! The `.psq` pressure-sequence format.
//!
//! Text layout: a header line `PSQ1 <H> <W> <fps> <N>`, then per frame a
//! `F <k>` line, one `<row> <col> <value>` line per non-zero cell, and a
//! terminating `E`. Values print in shortest round-trip form, so
//! write -> read -> write is byte-identical. Paths ending in `.gz` are
//! transparently gzip-wrapped for bulk runs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::io::{io_err, parse_err, IoError};
use crate::labelgen::PressureFrame;

type OpenFrame = (u32, Vec<(u16, u16, f64)>);

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

pub fn write_psq(path: &Path, frames: &[PressureFrame], fps: f64) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    if is_gz(path) {
        write_psq_to(&mut GzEncoder::new(BufWriter::new(file), Compression::default()), frames, fps)
            .map_err(|e| io_err(path, e))
    } else {
        write_psq_to(&mut BufWriter::new(file), frames, fps).map_err(|e| io_err(path, e))
    }
}

fn write_psq_to<W: Write>(w: &mut W, frames: &[PressureFrame], fps: f64) -> std::io::Result<()> {
    let (h, wd) = frames.first().map_or((240, 120), |f| (f.height, f.width));
    writeln!(w, "PSQ1 {h} {wd} {fps} {}", frames.len())?;
    for frame in frames {
        assert_eq!(
            (frame.height, frame.width),
            (h, wd),
            "all frames in a sequence share dimensions"
        );
        writeln!(w, "F {}", frame.frame)?;
        for &(r, c, v) in frame.cells() {
            writeln!(w, "{r} {c} {v}")?;
        }
        writeln!(w, "E")?;
    }
    w.flush()
}

pub fn read_psq(path: &Path) -> Result<(Vec<PressureFrame>, f64), IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    if is_gz(path) {
        read_psq_from(BufReader::new(GzDecoder::new(file)), path)
    } else {
        read_psq_from(BufReader::new(file), path)
    }
}

fn read_psq_from<R: Read>(reader: BufReader<R>, path: &Path) -> Result<(Vec<PressureFrame>, f64), IoError> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file, expected PSQ1 header"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "PSQ1" {
        return Err(parse_err(path, 1, format!("bad header '{header}', expected 'PSQ1 H W fps N'")));
    }
    let height: usize = parts[1]
        .parse()
        .map_err(|_| parse_err(path, 1, format!("bad height '{}'", parts[1])))?;
    let width: usize = parts[2]
        .parse()
        .map_err(|_| parse_err(path, 1, format!("bad width '{}'", parts[2])))?;
    let fps: f64 = parts[3]
        .parse()
        .map_err(|_| parse_err(path, 1, format!("bad fps '{}'", parts[3])))?;
    let count: usize = parts[4]
        .parse()
        .map_err(|_| parse_err(path, 1, format!("bad frame count '{}'", parts[4])))?;

    let mut frames = Vec::with_capacity(count);
    let mut current: Option<OpenFrame> = None;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("F ") {
            if current.is_some() {
                return Err(parse_err(path, line_no, "frame started before previous 'E'"));
            }
            let k: u32 = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad frame index '{rest}'")))?;
            current = Some((k, Vec::new()));
        } else if line == "E" {
            let (k, cells) = current
                .take()
                .ok_or_else(|| parse_err(path, line_no, "'E' without an open frame"))?;
            let frame = PressureFrame::from_cells(k, height, width, cells)
                .map_err(|e| parse_err(path, line_no, e.to_string()))?;
            frames.push(frame);
        } else {
            let (_, cells) = current
                .as_mut()
                .ok_or_else(|| parse_err(path, line_no, format!("cell line '{line}' outside a frame")))?;
            let mut it = line.split_whitespace();
            let (r, c, v) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(r), Some(c), Some(v), None) => (r, c, v),
                _ => return Err(parse_err(path, line_no, format!("expected 'row col value', got '{line}'"))),
            };
            let r: u16 = r.parse().map_err(|_| parse_err(path, line_no, format!("bad row '{r}'")))?;
            let c: u16 = c.parse().map_err(|_| parse_err(path, line_no, format!("bad col '{c}'")))?;
            let v: f64 = v.parse().map_err(|_| parse_err(path, line_no, format!("bad value '{v}'")))?;
            if (r as usize) >= height || (c as usize) >= width {
                return Err(parse_err(path, line_no, format!("cell ({r}, {c}) outside {height}x{width} grid")));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(parse_err(path, line_no, format!("negative or non-finite pressure {v}")));
            }
            cells.push((r, c, v));
        }
    }
    if current.is_some() {
        return Err(parse_err(path, 0, "truncated file: last frame has no 'E'"));
    }
    if frames.len() != count {
        return Err(parse_err(
            path,
            0,
            format!("header declares {count} frames but the body holds {}", frames.len()),
        ));
    }
    Ok((frames, fps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn roundtrip(frames: &[PressureFrame], fps: f64, name: &str) -> (Vec<PressureFrame>, f64) {
        let dir = tempdir().unwrap();
        let path = dir.path().join(name);
        write_psq(&path, frames, fps).unwrap();
        read_psq(&path).unwrap()
    }

    #[test]
    fn empty_sequence_round_trips() {
        let (frames, fps) = roundtrip(&[], 25.0, "empty.psq");
        assert!(frames.is_empty());
        assert_eq!(fps, 25.0);
    }

    #[test]
    fn single_cell_file_layout() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("one.psq");
        let frame = PressureFrame::from_cells(1, 240, 120, vec![(3, 4, 1.5)]).unwrap();
        write_psq(&path, &[frame], 25.0).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "PSQ1 240 120 25 1\nF 1\n3 4 1.5\nE\n");
    }

    #[test]
    fn write_read_write_is_byte_identical() {
        let frames: Vec<PressureFrame> = (1..=5)
            .map(|k| {
                PressureFrame::from_cells(
                    k,
                    240,
                    120,
                    vec![
                        (10, 10, 1.0 / 3.0),
                        (k as u16, 2 * k as u16, 0.1 * k as f64),
                    ],
                )
                .unwrap()
            })
            .collect();
        let dir = tempdir().unwrap();
        let p1 = dir.path().join("a.psq");
        let p2 = dir.path().join("b.psq");
        write_psq(&p1, &frames, 25.0).unwrap();
        let (read_back, fps) = read_psq(&p1).unwrap();
        assert_eq!(read_back, frames);
        write_psq(&p2, &read_back, fps).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn gzip_wrapper_round_trips() {
        let frames = vec![PressureFrame::from_cells(1, 240, 120, vec![(7, 8, 2.25)]).unwrap()];
        let (read_back, _) = roundtrip(&frames, 30.0, "seq.psq.gz");
        assert_eq!(read_back, frames);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("bad.psq");

        std::fs::write(&p, "NOPE 1 2 3 4\n").unwrap();
        let e = read_psq(&p).unwrap_err().to_string();
        assert!(e.contains(":1:"), "{e}");

        std::fs::write(&p, "PSQ1 240 120 25 1\nF 1\n900 4 1.0\nE\n").unwrap();
        let e = read_psq(&p).unwrap_err().to_string();
        assert!(e.contains(":3:") && e.contains("outside"), "{e}");

        std::fs::write(&p, "PSQ1 240 120 25 1\nF 1\n3 4 1.0\n").unwrap();
        let e = read_psq(&p).unwrap_err().to_string();
        assert!(e.contains("truncated"), "{e}");

        std::fs::write(&p, "PSQ1 240 120 25 2\nF 1\nE\n").unwrap();
        let e = read_psq(&p).unwrap_err().to_string();
        assert!(e.contains("declares 2 frames"), "{e}");

        std::fs::write(&p, "PSQ1 240 120 25 1\nF 1\n3 4 -1.0\nE\n").unwrap();
        let e = read_psq(&p).unwrap_err().to_string();
        assert!(e.contains("negative"), "{e}");
    }
}
