//! Tracking CSV: `frame,id,x,y,w,h,conf` with 6-decimal fixed floats.
//!
//! Frames are 1-based, coordinates follow the image convention (y down,
//! x along columns). Raw detections carry id -1; ground truth and track
//! output carry real ids. No header row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::geometry::BBox;
use crate::io::{io_err, parse_err, IoError};
use crate::labelgen::LabelRow;
use crate::metrics::MotRow;
use crate::tracker::{Detection, TrackOutput};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotCsvRow {
    pub frame: u32,
    pub id: i64,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub conf: f64,
}

impl MotCsvRow {
    pub fn bbox(&self) -> BBox {
        BBox::new(self.x, self.y, self.w, self.h)
    }

    pub fn from_detection(d: &Detection) -> Self {
        Self { frame: d.frame, id: -1, x: d.bbox.x, y: d.bbox.y, w: d.bbox.w, h: d.bbox.h, conf: d.conf }
    }

    pub fn from_track(t: &TrackOutput) -> Self {
        Self { frame: t.frame, id: t.id as i64, x: t.bbox.x, y: t.bbox.y, w: t.bbox.w, h: t.bbox.h, conf: t.conf }
    }

    pub fn from_label(l: &LabelRow) -> Self {
        Self {
            frame: l.frame,
            id: l.person_id as i64,
            x: l.bbox.x,
            y: l.bbox.y,
            w: l.bbox.w,
            h: l.bbox.h,
            conf: 1.0,
        }
    }

    pub fn to_detection(self) -> Detection {
        Detection { frame: self.frame, bbox: self.bbox(), conf: self.conf }
    }

    pub fn to_mot(self) -> MotRow {
        MotRow { frame: self.frame, id: self.id, bbox: self.bbox() }
    }
}

pub fn write_mot_csv(path: &Path, rows: &[MotCsvRow]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for r in rows {
        writeln!(
            w,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.frame, r.id, r.x, r.y, r.w, r.h, r.conf
        )
        .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_mot_csv(path: &Path) -> Result<Vec<MotCsvRow>, IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(parse_err(path, line_no, format!("expected 7 fields, got {}", fields.len())));
        }
        let frame: u32 = fields[0]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad frame '{}'", fields[0])))?;
        if frame == 0 {
            return Err(parse_err(path, line_no, "frame indices are 1-based"));
        }
        let id: i64 = fields[1]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad id '{}'", fields[1])))?;
        let mut nums = [0.0f64; 5];
        for (i, f) in fields[2..].iter().enumerate() {
            nums[i] = f
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad number '{f}'")))?;
        }
        let [x, y, w, h, conf] = nums;
        if !(w > 0.0 && h > 0.0) {
            return Err(parse_err(path, line_no, format!("non-positive box {w}x{h}")));
        }
        if !conf.is_finite() {
            return Err(parse_err(path, line_no, "non-finite confidence"));
        }
        rows.push(MotCsvRow { frame, id, x, y, w, h, conf });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use tempfile::tempdir;

    #[test]
    fn empty_file_reads_empty() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("empty.csv");
        write_mot_csv(&p, &[]).unwrap();
        assert!(read_mot_csv(&p).unwrap().is_empty());
    }

    #[test]
    fn one_row_round_trips() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("one.csv");
        let rows = vec![MotCsvRow { frame: 3, id: -1, x: 1.5, y: 2.25, w: 10.0, h: 25.0, conf: 0.85 }];
        write_mot_csv(&p, &rows).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "3,-1,1.500000,2.250000,10.000000,25.000000,0.850000\n"
        );
        assert_eq!(read_mot_csv(&p).unwrap(), rows);
    }

    #[test]
    fn large_file_round_trips() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("big.csv");
        let rows: Vec<MotCsvRow> = (0..100_000u32)
            .map(|i| MotCsvRow {
                frame: i / 3 + 1,
                id: (i % 7) as i64,
                x: (i % 100) as f64 * 0.371,
                y: (i % 211) as f64 * 0.553,
                w: 5.0 + (i % 13) as f64,
                h: 12.0 + (i % 29) as f64,
                conf: ((i % 1000) as f64) / 1000.0,
            })
            .collect();
        write_mot_csv(&p, &rows).unwrap();
        let back = read_mot_csv(&p).unwrap();
        assert_eq!(back.len(), rows.len());
        // lossless at 6-decimal precision: a second write is byte-identical
        let p2 = dir.path().join("big2.csv");
        write_mot_csv(&p2, &back).unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "1,1,0,0,5,5,1\n2,1,0,0\n").unwrap();
        let e = read_mot_csv(&p).unwrap_err().to_string();
        assert!(e.contains(":2:") && e.contains("7 fields"), "{e}");

        std::fs::write(&p, "1,1,0,0,abc,5,1\n").unwrap();
        let e = read_mot_csv(&p).unwrap_err().to_string();
        assert!(e.contains("bad number 'abc'"), "{e}");

        std::fs::write(&p, "1,1,0,0,0,5,1\n").unwrap();
        let e = read_mot_csv(&p).unwrap_err().to_string();
        assert!(e.contains("non-positive"), "{e}");

        std::fs::write(&p, "0,1,0,0,5,5,1\n").unwrap();
        let e = read_mot_csv(&p).unwrap_err().to_string();
        assert!(e.contains("1-based"), "{e}");
    }

    proptest! {
        #[test]
        fn six_decimal_round_trip_is_stable(
            frame in 1u32..10_000,
            id in -1i64..500,
            x in -50.0f64..200.0,
            y in -50.0f64..300.0,
            w in 0.01f64..150.0,
            h in 0.01f64..150.0,
            conf in 0.0f64..1.0,
        ) {
            let dir = tempdir().unwrap();
            let p = dir.path().join("prop.csv");
            write_mot_csv(&p, &[MotCsvRow { frame, id, x, y, w, h, conf }]).unwrap();
            let first = std::fs::read(&p).unwrap();
            let back = read_mot_csv(&p).unwrap();
            write_mot_csv(&p, &back).unwrap();
            prop_assert_eq!(first, std::fs::read(&p).unwrap());
        }
    }
}
