//! Heatmap export. Rendering is presentation only, so plain f64 interpolation
//! is fine here; cell-volume signs are still taken from the exact values.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use copula_core::GridFunction;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, Rgb, RgbImage};

const SIDE: u32 = 360;

struct Shade {
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<Vec<f64>>,
    negative: Vec<Vec<bool>>,
}

impl Shade {
    fn new(f: &GridFunction) -> Shade {
        let mesh = f.mesh();
        let xs: Vec<f64> = mesh.xs().iter().map(|r| r.to_f64()).collect();
        let ys: Vec<f64> = mesh.ys().iter().map(|r| r.to_f64()).collect();
        let values = (0..=mesh.p())
            .map(|i| (0..=mesh.q()).map(|j| f.value(i, j).to_f64()).collect())
            .collect();
        let negative = f
            .cell_volume_matrix()
            .iter()
            .map(|row| row.iter().map(|v| v.is_negative()).collect())
            .collect();
        Shade { xs, ys, values, negative }
    }

    fn segment(axis: &[f64], t: f64) -> (usize, f64) {
        let k = axis[1..axis.len() - 1].iter().take_while(|&&b| b <= t).count();
        let (lo, hi) = (axis[k], axis[k + 1]);
        (k, ((t - lo) / (hi - lo)).clamp(0.0, 1.0))
    }

    /// Bilinear value, negative-cell flag and breakpoint-line flag at (x, y).
    fn sample(&self, x: f64, y: f64) -> (f64, bool, bool) {
        let (i, u) = Self::segment(&self.xs, x);
        let (j, v) = Self::segment(&self.ys, y);
        let val = self.values[i][j] * (1.0 - u) * (1.0 - v)
            + self.values[i + 1][j] * u * (1.0 - v)
            + self.values[i][j + 1] * (1.0 - u) * v
            + self.values[i + 1][j + 1] * u * v;
        let eps = 1.0 / SIDE as f64;
        let on_line = self.xs.iter().any(|&b| (x - b).abs() < eps)
            || self.ys.iter().any(|&b| (y - b).abs() < eps);
        (val, self.negative[i][j], on_line)
    }
}

pub fn save_heatmap(f: &GridFunction, path: &Path) -> Result<(), String> {
    let shade = Shade::new(f);
    let pixel = |px: u32, py: u32| {
        // Mathematical orientation: y grows upward.
        let x = (px as f64 + 0.5) / SIDE as f64;
        let y = 1.0 - (py as f64 + 0.5) / SIDE as f64;
        let (val, neg, line) = shade.sample(x, y);
        let mut level = (val.clamp(0.0, 1.0) * 255.0).round() as u8;
        if line {
            level = level.saturating_sub(60);
        }
        (level, neg)
    };
    let save_err = |e: image::ImageError| format!("cannot write {}: {e}", path.display());
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    // The generic pnm path writes PAM; force the classic binary subtypes.
    let pnm = |subtype| -> Result<PnmEncoder<BufWriter<File>>, String> {
        let file = File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(PnmEncoder::new(BufWriter::new(file)).with_subtype(subtype))
    };
    match ext {
        "pgm" => {
            let mut img = GrayImage::new(SIDE, SIDE);
            for (px, py, p) in img.enumerate_pixels_mut() {
                p.0 = [pixel(px, py).0];
            }
            pnm(PnmSubtype::Graymap(SampleEncoding::Binary))?
                .write_image(&img, SIDE, SIDE, ExtendedColorType::L8)
                .map_err(save_err)
        }
        _ => {
            let mut img = RgbImage::new(SIDE, SIDE);
            for (px, py, p) in img.enumerate_pixels_mut() {
                let (level, neg) = pixel(px, py);
                *p = if neg {
                    Rgb([level.max(160), level / 2, level / 2])
                } else {
                    Rgb([level, level, level])
                };
            }
            if ext == "ppm" {
                pnm(PnmSubtype::Pixmap(SampleEncoding::Binary))?
                    .write_image(&img, SIDE, SIDE, ExtendedColorType::Rgb8)
                    .map_err(save_err)
            } else {
                img.save(path).map_err(save_err)
            }
        }
    }
}
