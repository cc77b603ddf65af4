//! Crop archive: `track_<id>/frame_<k>.pgm` 16-bit binary PGM patches plus
//! a `centers.csv` sidecar with rows `track_id,frame,cx,cy`.
//!
//! Pressure quantizes linearly against a full-scale value (the per-cell
//! saturation by default), clamped to [0, 65535].

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::io::{io_err, parse_err, IoError};
use crate::tracker::{Crop, CROP_SIZE};

pub fn write_crops(dir: &Path, crops: &[Crop], full_scale: f64) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut centers = String::new();
    for crop in crops {
        let track_dir = dir.join(format!("track_{}", crop.track_id));
        fs::create_dir_all(&track_dir).map_err(|e| io_err(&track_dir, e))?;
        let path = track_dir.join(format!("frame_{}.pgm", crop.frame));
        write_pgm(&path, &crop.values, full_scale)?;
        centers.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            crop.track_id, crop.frame, crop.center.x, crop.center.y
        ));
    }
    let centers_path = dir.join("centers.csv");
    fs::write(&centers_path, centers).map_err(|e| io_err(&centers_path, e))
}

fn write_pgm(path: &Path, values: &[f64], full_scale: f64) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    write!(w, "P5\n{CROP_SIZE} {CROP_SIZE}\n65535\n").map_err(|e| io_err(path, e))?;
    let mut bytes = Vec::with_capacity(values.len() * 2);
    for &v in values {
        let q = ((v / full_scale).clamp(0.0, 1.0) * 65535.0).round() as u16;
        bytes.extend_from_slice(&q.to_be_bytes());
    }
    w.write_all(&bytes).map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a 16-bit binary PGM back as (width, height, big-endian samples).
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<u16>), IoError> {
    let mut data = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut data))
        .map_err(|e| io_err(path, e))?;
    // header: three whitespace-separated tokens after the magic
    let header_end = {
        let mut fields = 0;
        let mut i = 0;
        let mut in_token = false;
        while i < data.len() && fields < 4 {
            let ws = data[i].is_ascii_whitespace();
            if !ws && !in_token {
                in_token = true;
            } else if ws && in_token {
                in_token = false;
                fields += 1;
            }
            i += 1;
        }
        if fields < 4 {
            return Err(parse_err(path, 1, "truncated PGM header"));
        }
        i
    };
    let header = std::str::from_utf8(&data[..header_end])
        .map_err(|_| parse_err(path, 1, "non-UTF8 PGM header"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("P5") {
        return Err(parse_err(path, 1, "not a binary PGM (missing P5 magic)"));
    }
    let width: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(path, 1, "bad PGM width"))?;
    let height: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(path, 1, "bad PGM height"))?;
    let maxval: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(path, 1, "bad PGM maxval"))?;
    if maxval != 65535 {
        return Err(parse_err(path, 1, format!("expected 16-bit PGM, maxval {maxval}")));
    }
    let body = &data[header_end..];
    if body.len() != width * height * 2 {
        return Err(parse_err(
            path,
            1,
            format!("PGM body holds {} bytes, expected {}", body.len(), width * height * 2),
        ));
    }
    let samples = body
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok((width, height, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use tempfile::tempdir;

    #[test]
    fn archive_layout_and_quantization() {
        let dir = tempdir().unwrap();
        let mut values = vec![0.0; CROP_SIZE * CROP_SIZE];
        values[5 * CROP_SIZE + 9] = 25.0; // half of full scale
        values[0] = 100.0; // clamps to max
        let crops = vec![
            Crop { track_id: 2, frame: 7, values: values.clone(), center: Point::new(30.5, 40.0) },
            Crop { track_id: 2, frame: 8, values: vec![0.0; CROP_SIZE * CROP_SIZE], center: Point::new(31.0, 41.0) },
        ];
        write_crops(dir.path(), &crops, 50.0).unwrap();

        let (w, h, samples) = read_pgm(&dir.path().join("track_2/frame_7.pgm")).unwrap();
        assert_eq!((w, h), (CROP_SIZE, CROP_SIZE));
        assert_eq!(samples[5 * CROP_SIZE + 9], 32768); // 0.5 * 65535 rounded
        assert_eq!(samples[0], 65535);
        assert!(samples.iter().filter(|&&s| s != 0).count() == 2);

        let centers = std::fs::read_to_string(dir.path().join("centers.csv")).unwrap();
        assert_eq!(centers, "2,7,30.500000,40.000000\n2,8,31.000000,41.000000\n");
    }

    #[test]
    fn pgm_rejects_wrong_magic() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("bad.pgm");
        std::fs::write(&p, b"P2\n2 2\n65535\n0 0 0 0\n").unwrap();
        assert!(read_pgm(&p).is_err());
    }
}
