use std::sync::Arc;

use ndarray::ArrayViewMut2;
use rustfft::{Fft, FftPlanner};

use crate::C64;

/// Cached 2D FFT plans for one `(nx, ny)` plane size.
///
/// Rows (the contiguous y axis) are transformed in place; columns go through
/// a per-call scratch buffer. No normalization is applied here.
pub(crate) struct Fft2 {
    nx: usize,
    ny: usize,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            nx,
            ny,
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
        }
    }

    pub fn forward(&self, plane: &mut ArrayViewMut2<'_, C64>) {
        self.transform(plane, true);
    }

    pub fn inverse(&self, plane: &mut ArrayViewMut2<'_, C64>) {
        self.transform(plane, false);
    }

    fn transform(&self, plane: &mut ArrayViewMut2<'_, C64>, fwd: bool) {
        debug_assert_eq!(plane.dim(), (self.nx, self.ny));
        let (fx, fy) = if fwd {
            (&self.fwd_x, &self.fwd_y)
        } else {
            (&self.inv_x, &self.inv_y)
        };
        for mut row in plane.rows_mut() {
            let slice = row.as_slice_mut().expect("plane rows must be contiguous");
            fy.process(slice);
        }
        let mut col = vec![C64::new(0.0, 0.0); self.nx];
        for m in 0..self.ny {
            for n in 0..self.nx {
                col[n] = plane[[n, m]];
            }
            fx.process(&mut col);
            for n in 0..self.nx {
                plane[[n, m]] = col[n];
            }
        }
    }
}
