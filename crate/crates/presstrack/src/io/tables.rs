//! Annotation and trajectory tables.
//!
//! Annotations: `frame,person_id,kind,x,y` where kind is `root` or one of
//! the foot joints (`l_toe`, `l_ankle`, `r_toe`, `r_ankle`). Trajectories:
//! `person_id,frame,x,y`, one row per on-mat frame. No header rows.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::geometry::Point;
use crate::io::{io_err, parse_err, IoError};
use crate::labelgen::{AnnotationRow, JointKind};
use crate::metrics::Trajectory;

pub fn write_annotations(path: &Path, rows: &[AnnotationRow]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for r in rows {
        writeln!(w, "{},{},{},{:.6},{:.6}", r.frame, r.person_id, r.kind.as_str(), r.x, r.y)
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_annotations(path: &Path) -> Result<Vec<AnnotationRow>, IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(parse_err(path, line_no, format!("expected 5 fields, got {}", f.len())));
        }
        let frame: u32 = f[0]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad frame '{}'", f[0])))?;
        let person_id: u32 = f[1]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad person id '{}'", f[1])))?;
        let kind = JointKind::parse(f[2])
            .ok_or_else(|| parse_err(path, line_no, format!("unknown joint kind '{}'", f[2])))?;
        let x: f64 = f[3].parse().map_err(|_| parse_err(path, line_no, format!("bad x '{}'", f[3])))?;
        let y: f64 = f[4].parse().map_err(|_| parse_err(path, line_no, format!("bad y '{}'", f[4])))?;
        rows.push(AnnotationRow { frame, person_id, kind, x, y });
    }
    Ok(rows)
}

pub fn write_trajectories(path: &Path, trajectories: &[Trajectory]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for t in trajectories {
        for (frame, p) in &t.points {
            writeln!(w, "{},{},{:.6},{:.6}", t.person_id, frame, p.x, p.y)
                .map_err(|e| io_err(path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads trajectories grouped by person id (ascending); frames must be
/// strictly increasing within each person.
pub fn read_trajectories(path: &Path) -> Result<Vec<Trajectory>, IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut by_person: std::collections::BTreeMap<u32, Vec<(u32, Point)>> = Default::default();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(parse_err(path, line_no, format!("expected 4 fields, got {}", f.len())));
        }
        let person_id: u32 = f[0]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad person id '{}'", f[0])))?;
        let frame: u32 = f[1]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad frame '{}'", f[1])))?;
        let x: f64 = f[2].parse().map_err(|_| parse_err(path, line_no, format!("bad x '{}'", f[2])))?;
        let y: f64 = f[3].parse().map_err(|_| parse_err(path, line_no, format!("bad y '{}'", f[3])))?;
        by_person.entry(person_id).or_default().push((frame, Point::new(x, y)));
    }
    by_person
        .into_iter()
        .map(|(person_id, points)| {
            Trajectory::new(person_id, points)
                .map_err(|e| parse_err(path, 0, e.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn annotations_round_trip() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("ann.csv");
        let rows = vec![
            AnnotationRow { frame: 1, person_id: 2, kind: JointKind::Root, x: 60.0, y: 30.5 },
            AnnotationRow { frame: 1, person_id: 2, kind: JointKind::LToe, x: 58.25, y: 36.0 },
        ];
        write_annotations(&p, &rows).unwrap();
        assert_eq!(read_annotations(&p).unwrap(), rows);
        std::fs::write(&p, "1,2,elbow,0,0\n").unwrap();
        let e = read_annotations(&p).unwrap_err().to_string();
        assert!(e.contains("unknown joint kind 'elbow'"), "{e}");
    }

    #[test]
    fn trajectories_round_trip_grouped() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("traj.csv");
        let trajs = vec![
            Trajectory::new(1, vec![(1, Point::new(0.0, 0.0)), (2, Point::new(1.0, 0.5))]).unwrap(),
            Trajectory::new(2, vec![(1, Point::new(10.0, 20.0))]).unwrap(),
        ];
        write_trajectories(&p, &trajs).unwrap();
        assert_eq!(read_trajectories(&p).unwrap(), trajs);
    }

    #[test]
    fn unordered_trajectory_frames_rejected() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "1,5,0,0\n1,4,1,1\n").unwrap();
        assert!(read_trajectories(&p).is_err());
    }
}
