//! ASCII and SVG pictures of partitions.
//!
//! Both outputs are pure functions of their inputs. In SVG, each box is a
//! `<g>` of rectangles, one per pair of a maximal run of consecutive rows and
//! a maximal run of consecutive columns. A thin box whose cells form a
//! cyclic interval wrapping past the last line (as on a torus) is split into
//! its two runs and marked with the `wrapped` class.

use std::fmt::Write as _;

use thiserror::Error;

use crate::partition::{validate_partition, BoxShape, Partition, PartitionError, SubBox};

pub const LABELS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{0} boxes exceed the {max} single-character labels", max = LABELS.len())]
    TooManyBoxes(usize),
    #[error(transparent)]
    Invalid(#[from] PartitionError),
}

/// One label character per cell, one line per row.
pub fn render_ascii(p: &Partition) -> Result<String, RenderError> {
    validate_partition(p)?;
    if p.len() > LABELS.len() {
        return Err(RenderError::TooManyBoxes(p.len()));
    }
    let dims = p.dims();
    let mut grid = vec![b'?'; dims.m * dims.n];
    for (id, b) in p.boxes().iter().enumerate() {
        for r in b.rows.iter() {
            for c in b.cols.iter() {
                grid[r * dims.n + c] = LABELS[id];
            }
        }
    }
    let mut out = String::with_capacity(dims.m * (dims.n + 1));
    for row in grid.chunks(dims.n) {
        out.push_str(std::str::from_utf8(row).expect("labels are ASCII"));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    BoxIds,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WrapStyle {
    /// Dashed marker on the grid edge where a wrapped box continues.
    Marker,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub cell_size: u32,
    pub palette_seed: u64,
    pub labels: LabelMode,
    pub wrap: WrapStyle,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell_size: 24,
            palette_seed: 0,
            labels: LabelMode::BoxIds,
            wrap: WrapStyle::Marker,
        }
    }
}

/// Maximal runs of consecutive indices, as `(start, len)`.
pub fn runs(indices: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in indices {
        match out.last_mut() {
            Some((s, len)) if *s + *len == i => *len += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

/// Two runs touching both ends of `0..len`, i.e. a cyclic interval that
/// wraps around.
pub fn is_wrapped(indices: &[usize], len: usize) -> bool {
    let r = runs(indices);
    r.len() == 2 && r[0].0 == 0 && r[1].0 + r[1].1 == len
}

/// Fill colour of box `id`: hue steps of 137 degrees (coprime to 360), so the
/// first 360 boxes get pairwise distinct colours.
pub fn box_color(id: usize, seed: u64) -> String {
    let hue = ((seed % 360) as usize * 47 + id * 137) % 360;
    let (s, l) = (0.65_f64, 0.6_f64);
    let c = (1.0 - (2.0 * l - 1.0_f64).abs()) * s;
    let hp = hue as f64 / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hue / 60 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to = |v: f64| ((v + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to(r), to(g), to(b))
}

fn shape_class(shape: BoxShape) -> &'static str {
    match shape {
        BoxShape::HorizontallyThin => "h-thin",
        BoxShape::VerticallyThin => "v-thin",
        BoxShape::Singleton => "singleton",
        BoxShape::Fat => "fat",
    }
}

/// Rectangles `(row, col, height, width)` in cell units for one box: the
/// products of its maximal row runs and maximal column runs.
fn box_rects(b: &SubBox) -> Vec<(usize, usize, usize, usize)> {
    let row_runs = runs(&b.rows.to_vec());
    let col_runs = runs(&b.cols.to_vec());
    row_runs
        .iter()
        .flat_map(|&(r, h)| col_runs.iter().map(move |&(c, w)| (r, c, h, w)))
        .collect()
}

pub fn render_svg(p: &Partition, spec: &RenderSpec) -> Result<String, RenderError> {
    validate_partition(p)?;
    let dims = p.dims();
    let cs = spec.cell_size.max(1) as usize;
    let (w, h) = (dims.n * cs, dims.m * cs);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" data-rows=\"{}\" data-cols=\"{}\">",
        dims.m, dims.n
    );
    for (id, b) in p.boxes().iter().enumerate() {
        let shape = b.shape();
        let wrapped = match shape {
            BoxShape::HorizontallyThin => is_wrapped(&b.cols.to_vec(), dims.n),
            BoxShape::VerticallyThin => is_wrapped(&b.rows.to_vec(), dims.m),
            _ => false,
        };
        let class = if wrapped {
            format!("box {} wrapped", shape_class(shape))
        } else {
            format!("box {}", shape_class(shape))
        };
        let _ = writeln!(
            out,
            "  <g class=\"{class}\" data-box=\"{id}\" data-cells=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"1\">",
            b.area(),
            box_color(id, spec.palette_seed)
        );
        for (r, c, rh, cw) in box_rects(b) {
            let _ = writeln!(
                out,
                "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                c * cs,
                r * cs,
                cw * cs,
                rh * cs
            );
        }
        if wrapped && spec.wrap == WrapStyle::Marker {
            // Dashed edges where the box leaves one side and re-enters the other.
            let segs: Vec<(usize, usize, usize, usize)> = match shape {
                BoxShape::HorizontallyThin => {
                    let r = b.rows.first().expect("nonempty");
                    vec![(0, r * cs, 0, (r + 1) * cs), (w, r * cs, w, (r + 1) * cs)]
                }
                _ => {
                    let c = b.cols.first().expect("nonempty");
                    vec![(c * cs, 0, (c + 1) * cs, 0), (c * cs, h, (c + 1) * cs, h)]
                }
            };
            for (x1, y1, x2, y2) in segs {
                let _ = writeln!(
                    out,
                    "    <line class=\"wrap\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#000000\" stroke-width=\"3\" stroke-dasharray=\"3,2\"/>"
                );
            }
        }
        if spec.labels == LabelMode::BoxIds {
            let (r, c, _, _) = box_rects(b)[0];
            let _ = writeln!(
                out,
                "    <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"#000000\" stroke=\"none\">{id}</text>",
                c * cs + cs / 2,
                r * cs + cs / 2,
                (cs * 2 / 5).max(1)
            );
        }
        out.push_str("  </g>\n");
    }
    let _ = writeln!(
        out,
        "  <rect class=\"frame\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>"
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::construct;
    use crate::partition::GridDims;

    #[test]
    fn single_box_ascii() {
        let p = Partition::single_box(GridDims::new(2, 2).unwrap());
        assert_eq!(render_ascii(&p).unwrap(), "AA\nAA\n");
    }

    #[test]
    fn two_two_ascii() {
        let p = construct(2, 2).unwrap();
        assert_eq!(render_ascii(&p).unwrap(), "AD\nCB\n");
    }

    #[test]
    fn too_many_boxes() {
        let p = Partition::singletons(GridDims::new(7, 9).unwrap());
        assert_eq!(render_ascii(&p), Err(RenderError::TooManyBoxes(63)));
    }

    #[test]
    fn runs_and_wrap() {
        assert_eq!(runs(&[0, 1, 3, 4, 5, 9]), vec![(0, 2), (3, 3), (9, 1)]);
        assert!(is_wrapped(&[0, 7, 8, 9, 10], 11));
        assert!(!is_wrapped(&[0, 1, 2], 11));
        assert!(!is_wrapped(&[0, 2, 10], 11));
    }

    #[test]
    fn single_box_svg_has_one_rect() {
        let p = Partition::single_box(GridDims::new(3, 3).unwrap());
        let spec = RenderSpec::default();
        let svg = render_svg(&p, &spec).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 1);
        assert!(svg.contains("<rect x=\"0\" y=\"0\" width=\"72\" height=\"72\"/>"));
        assert_eq!(svg.matches("<g ").count(), 1);

        let d = GridDims::new(3, 3).unwrap();
        let boxes = vec![
            SubBox::from_indices(d, [0, 2], [0, 1, 2]),
            SubBox::from_indices(d, [1], [0, 1, 2]),
        ];
        let p = Partition::new(d, boxes).unwrap();
        let svg = render_svg(&p, &spec).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 3);

        let p = Partition::single_box(GridDims::new(1, 4).unwrap());
        let svg = render_svg(&p, &spec).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 1);
    }

    #[test]
    fn colors_distinct_for_many_boxes() {
        let mut colors: Vec<String> = (0..360).map(|i| box_color(i, 3)).collect();
        colors.sort();
        colors.dedup();
        assert_eq!(colors.len(), 360);
    }
}
