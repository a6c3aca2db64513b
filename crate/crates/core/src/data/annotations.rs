//! Annotation CSV: `image, subject_id, disguise_id, viewpoint`, then
//! `<name>_x, <name>_y, <name>_visible` for each of the 20 keypoints.

use std::io::{Read, Write};
use std::path::Path;

use super::Annotation;
use crate::error::{Error, Result};
use crate::keypoints::{Point, KEYPOINT_COUNT, KEYPOINT_NAMES};

pub fn header() -> Vec<String> {
    let mut h: Vec<String> = ["image", "subject_id", "disguise_id", "viewpoint"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for n in KEYPOINT_NAMES {
        h.push(format!("{n}_x"));
        h.push(format!("{n}_y"));
        h.push(format!("{n}_visible"));
    }
    h
}

pub fn write_annotations<W: Write>(annotations: &[Annotation], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::format("annotations", e.to_string());
    w.write_record(header()).map_err(csv_err)?;
    for a in annotations {
        let mut row = vec![
            a.image.clone(),
            a.subject_id.to_string(),
            a.disguise_id.to_string(),
            a.viewpoint.to_string(),
        ];
        for (p, &v) in a.keypoints.points.iter().zip(&a.keypoints.visible) {
            row.push(p.x.to_string());
            row.push(p.y.to_string());
            row.push(if v { "1" } else { "0" }.to_string());
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::format("annotations", e.to_string()))?;
    Ok(())
}

/// Parses an annotation CSV. Rows are numbered as file lines, header = 1.
pub fn read_annotations<R: Read>(input: R) -> Result<Vec<Annotation>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let expected = header();
    let mut records = r.records();
    let head = match records.next() {
        Some(rec) => rec.map_err(|e| Error::format("annotations header", e.to_string()))?,
        None => return Err(Error::format("annotations header", "file is empty; a header row is required")),
    };
    for (i, name) in expected.iter().enumerate() {
        match head.get(i) {
            Some(h) if h.trim() == name => {}
            Some(h) => {
                return Err(Error::Parse {
                    row: 1,
                    column: name.clone(),
                    message: format!("header has {h:?} where {name:?} belongs"),
                })
            }
            None => {
                return Err(Error::Parse {
                    row: 1,
                    column: name.clone(),
                    message: "missing column in header".into(),
                })
            }
        }
    }

    let mut out = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: "-".into(),
            message: e.to_string(),
        })?;
        let field = |col: usize| -> Result<&str> {
            rec.get(col).map(str::trim).ok_or_else(|| Error::Parse {
                row,
                column: expected[col].clone(),
                message: format!("row has {} fields, expected {}", rec.len(), expected.len()),
            })
        };
        fn num<T: std::str::FromStr>(row: usize, column: &str, s: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                row,
                column: column.to_string(),
                message: format!("{s:?} is not a valid number"),
            })
        }
        if rec.len() > expected.len() {
            return Err(Error::Parse {
                row,
                column: format!("#{}", expected.len() + 1),
                message: format!("row has {} fields, expected {}", rec.len(), expected.len()),
            });
        }
        let mut a = Annotation {
            image: field(0)?.to_string(),
            subject_id: num(row, &expected[1], field(1)?)?,
            disguise_id: num(row, &expected[2], field(2)?)?,
            viewpoint: num(row, &expected[3], field(3)?)?,
            keypoints: crate::keypoints::canonical_template(),
        };
        for k in 0..KEYPOINT_COUNT {
            let c = 4 + 3 * k;
            let x: f64 = num(row, &expected[c], field(c)?)?;
            let y: f64 = num(row, &expected[c + 1], field(c + 1)?)?;
            let v = match field(c + 2)? {
                "1" | "true" => true,
                "0" | "false" => false,
                other => {
                    return Err(Error::Parse {
                        row,
                        column: expected[c + 2].clone(),
                        message: format!("{other:?} is not a visibility flag (0 or 1)"),
                    })
                }
            };
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: expected[c].clone(),
                    message: "coordinate is not finite".into(),
                });
            }
            a.keypoints.points[k] = Point::new(x, y);
            a.keypoints.visible[k] = v;
        }
        out.push(a);
    }
    Ok(out)
}

pub fn save_annotations(annotations: &[Annotation], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_annotations(annotations, std::io::BufWriter::new(f))
}

pub fn load_annotations(path: &Path) -> Result<Vec<Annotation>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_annotations(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_dataset;

    fn sample_annotations() -> Vec<Annotation> {
        generate_dataset(2, 3, 1, 32)
            .unwrap()
            .into_iter()
            .map(|s| s.annotation)
            .collect()
    }

    #[test]
    fn round_trip_is_lossless() {
        let a = sample_annotations();
        let mut buf = Vec::new();
        write_annotations(&a, &mut buf).unwrap();
        assert_eq!(read_annotations(&buf[..]).unwrap(), a);
    }

    #[test]
    fn header_only_is_empty() {
        let mut buf = Vec::new();
        write_annotations(&[], &mut buf).unwrap();
        assert!(read_annotations(&buf[..]).unwrap().is_empty());
    }

    #[test]
    fn short_row_names_row_and_column() {
        let a = sample_annotations();
        let mut buf = Vec::new();
        write_annotations(&a[..1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        // 4 label columns + 39 coordinates: drops the last keypoint's y and flag
        let fields: Vec<&str> = lines[1].split(',').collect();
        let truncated = fields[..fields.len() - 2].join(",");
        lines[1] = &truncated;
        let err = read_annotations(lines.join("\n").as_bytes()).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "jaw_right_y");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn non_numeric_coordinate() {
        let a = sample_annotations();
        let mut buf = Vec::new();
        write_annotations(&a[..1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut fields: Vec<String> = lines[1].split(',').map(String::from).collect();
        fields[7] = "abc".into();
        lines[1] = fields.join(",");
        match read_annotations(lines.join("\n").as_bytes()).unwrap_err() {
            Error::Parse { row, column, .. } => assert_eq!((row, column.as_str()), (2, "brow_left_inner_x")),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_header_column() {
        let err = read_annotations("image,subject_id,viewpoint\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
    }
}
