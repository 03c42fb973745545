use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::fft::Fft2;

/// Vertical parity class of a scalar field.
///
/// `Odd` fields expand in `sin(k pi z)`, `k >= 1`, and vanish on the walls
/// `z = 0, 1`. `Even` fields expand in `cos(k pi z)`, `k >= 0`, and have
/// vanishing wall-normal derivative there. Multiplication obeys
/// (Odd, Odd) -> Even, (Odd, Even) -> Odd, (Even, Even) -> Even, and the
/// z-derivative swaps the two classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn product(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

/// Discretization of the slab `[0,L)^2 x (0,1)`.
///
/// Horizontal wavenumbers are `xi_n = 2 pi n / L` with
/// `n in {-Nx/2, ..., Nx/2 - 1}` in standard FFT order; the unpaired
/// Nyquist row is dropped by the analysis transform. The vertical
/// collocation grid is the midpoint grid `z_l = (l + 1/2)/Nz`, on which
/// both the sine and the cosine family are exactly orthogonal under the
/// plain midpoint sum, and `Nz >= ceil(3 Kmax / 2)` keeps quadratic
/// products alias-free after truncation back to `Kmax`.
pub struct Domain {
    /// Horizontal period (both directions).
    pub l: f64,
    pub nx: usize,
    pub ny: usize,
    /// Highest retained vertical wavenumber.
    pub kmax: usize,
    /// Vertical collocation count.
    pub nz: usize,
    /// `sin(k pi z_l)`, flat `[k][l]` with `k = 0..=kmax`.
    sin_tab: Vec<f64>,
    /// `cos(k pi z_l)`, same layout.
    cos_tab: Vec<f64>,
    fft: Fft2,
}

impl Domain {
    pub fn new(l: f64, nx: usize, ny: usize, kmax: usize, nz: usize) -> Result<Arc<Self>> {
        if l <= 0.0 {
            return Err(Error::InvalidArgument(format!("period L must be positive, got {l}")));
        }
        if nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid counts must be even and >= 8, got nx={nx}, ny={ny}"
            )));
        }
        if kmax < 1 {
            return Err(Error::InvalidArgument("kmax must be >= 1".into()));
        }
        let nz_min = (3 * kmax).div_ceil(2);
        if nz < nz_min {
            return Err(Error::InvalidArgument(format!(
                "nz={nz} under-resolves quadratic products; need nz >= {nz_min} for kmax={kmax}"
            )));
        }

        let mut sin_tab = vec![0.0; (kmax + 1) * nz];
        let mut cos_tab = vec![0.0; (kmax + 1) * nz];
        for k in 0..=kmax {
            for l_idx in 0..nz {
                let z = (l_idx as f64 + 0.5) / nz as f64;
                sin_tab[k * nz + l_idx] = (k as f64 * PI * z).sin();
                cos_tab[k * nz + l_idx] = (k as f64 * PI * z).cos();
            }
        }

        Ok(Arc::new(Domain {
            l,
            nx,
            ny,
            kmax,
            nz,
            sin_tab,
            cos_tab,
            fft: Fft2::new(nx, ny),
        }))
    }

    /// Domain with `nz` chosen one above the alias-free minimum.
    pub fn with_default_nz(l: f64, nx: usize, ny: usize, kmax: usize) -> Result<Arc<Self>> {
        Domain::new(l, nx, ny, kmax, (3 * kmax).div_ceil(2) + 1)
    }

    /// Signed horizontal index for storage index `n` of an axis of length `len`.
    #[inline]
    pub fn signed(n: usize, len: usize) -> i64 {
        if n < len / 2 {
            n as i64
        } else {
            n as i64 - len as i64
        }
    }

    /// Wavenumber `xi_n = 2 pi n / L` for storage index `n` on the x axis.
    #[inline]
    pub fn xi(&self, n: usize) -> f64 {
        2.0 * PI * Self::signed(n, self.nx) as f64 / self.l
    }

    /// Wavenumber `eta_m` on the y axis.
    #[inline]
    pub fn eta(&self, m: usize) -> f64 {
        2.0 * PI * Self::signed(m, self.ny) as f64 / self.l
    }

    /// Full symbol `xi^2 + eta^2 + pi^2 k^2` at mode `(n, m, k)`.
    #[inline]
    pub fn symbol(&self, n: usize, m: usize, k: usize) -> f64 {
        let xi = self.xi(n);
        let eta = self.eta(m);
        xi * xi + eta * eta + PI * PI * (k * k) as f64
    }

    /// Spectral quadrature weight standing in for `d xi d eta`.
    #[inline]
    pub fn mode_weight(&self) -> f64 {
        let d = 2.0 * PI / self.l;
        d * d
    }

    /// Two-thirds-rule predicate: true if mode index `n` survives dealiasing.
    #[inline]
    pub fn keep_x(&self, n: usize) -> bool {
        3 * Self::signed(n, self.nx).unsigned_abs() as usize <= self.nx
    }

    #[inline]
    pub fn keep_y(&self, m: usize) -> bool {
        3 * Self::signed(m, self.ny).unsigned_abs() as usize <= self.ny
    }

    #[inline]
    pub fn sin_basis(&self, k: usize, l_idx: usize) -> f64 {
        self.sin_tab[k * self.nz + l_idx]
    }

    #[inline]
    pub fn cos_basis(&self, k: usize, l_idx: usize) -> f64 {
        self.cos_tab[k * self.nz + l_idx]
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.fft
    }

    /// Shape of coefficient arrays: `(kmax + 1, nx, ny)`.
    pub fn spectral_shape(&self) -> (usize, usize, usize) {
        (self.kmax + 1, self.nx, self.ny)
    }

    /// Shape of collocation arrays: `(nz, nx, ny)`.
    pub fn physical_shape(&self) -> (usize, usize, usize) {
        (self.nz, self.nx, self.ny)
    }

    pub fn same_grid(&self, other: &Domain) -> bool {
        self.l == other.l
            && self.nx == other.nx
            && self.ny == other.ny
            && self.kmax == other.kmax
            && self.nz == other.nz
    }
}

impl std::fmt::Debug for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Domain")
            .field("l", &self.l)
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("kmax", &self.kmax)
            .field("nz", &self.nz)
            .finish()
    }
}
