//! Surface layout and link distances.
//!
//! Coordinates follow a single global frame: the RIS lies in the `z = 0` plane centred
//! on the origin and spans the x–y axes; the transmitting surface sits on the plane
//! `x = −d_ris` and the receiving surface on `x = D − d_ris`, both spanning y–z and
//! lifted to heights `l_t` and `l_r` above the RIS plane.
//!
//! Element indices are zero-based. Transmit/receive surfaces are linearised with the
//! y index running fastest (`index = iz·count_y + iy`); the RIS with its y index
//! running fastest (`index = ix·count_y + iy`).

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// Euclidean distance between two points.
#[inline]
pub fn exact_distance(p: Point3, q: Point3) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// A uniform rectangular array of elements.
///
/// `count_a` runs along the surface's first axis (y for the transmit/receive surfaces,
/// x for the RIS) and `count_b` along its second axis (z, respectively y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSpec {
    count_a: usize,
    count_b: usize,
    spacing: f64,
    element_gain: f64,
}

impl SurfaceSpec {
    pub fn new(count_a: usize, count_b: usize, spacing: f64, element_gain: f64) -> Result<Self> {
        if count_a == 0 || count_b == 0 {
            return Err(Error::Geometry(format!(
                "surface needs at least one element per axis, got {count_a}×{count_b}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::Geometry(format!("element spacing must be positive, got {spacing}")));
        }
        if !(element_gain.is_finite() && element_gain > 0.0) {
            return Err(Error::Geometry(format!(
                "element gain must be positive, got {element_gain}"
            )));
        }
        Ok(Self {
            count_a,
            count_b,
            spacing,
            element_gain,
        })
    }

    /// Array with the usual `λ/2` element pitch.
    pub fn half_wavelength(
        count_a: usize,
        count_b: usize,
        wavelength: f64,
        element_gain: f64,
    ) -> Result<Self> {
        Self::new(count_a, count_b, wavelength / 2.0, element_gain)
    }

    pub fn count_a(&self) -> usize {
        self.count_a
    }

    pub fn count_b(&self) -> usize {
        self.count_b
    }

    pub fn len(&self) -> usize {
        self.count_a * self.count_b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Linear power gain of a single element.
    pub fn element_gain(&self) -> f64 {
        self.element_gain
    }

    /// Physical element area `S_c = d²`.
    pub fn element_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Offset of element `i` along an axis with `count` elements, centred on zero.
    fn axis_offset(&self, i: usize, count: usize) -> f64 {
        self.spacing * (i as f64 - (count as f64 - 1.0) / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Tx,
    Rx,
    Ris,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Tx => "transmit",
            SurfaceKind::Rx => "receive",
            SurfaceKind::Ris => "RIS",
        }
    }
}

/// Placement of the three surfaces relative to each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    /// Distance `D` between the walls carrying the transmit and receive surfaces.
    pub wall_distance: f64,
    /// Distance `d_ris` from the RIS centre to the transmit wall.
    pub ris_offset: f64,
    /// Height `l_t` of the transmit surface centre above the RIS plane.
    pub tx_height: f64,
    /// Height `l_r` of the receive surface centre above the RIS plane.
    pub rx_height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    tx: SurfaceSpec,
    rx: SurfaceSpec,
    ris: SurfaceSpec,
    layout: Layout,
    wavelength: f64,
}

impl ScenarioGeometry {
    pub fn new(
        tx: SurfaceSpec,
        rx: SurfaceSpec,
        ris: SurfaceSpec,
        layout: Layout,
        wavelength: f64,
    ) -> Result<Self> {
        let Layout {
            wall_distance,
            ris_offset,
            tx_height,
            rx_height,
        } = layout;
        if !(wall_distance.is_finite() && wall_distance > 0.0) {
            return Err(Error::Geometry(format!(
                "wall distance must be positive, got {wall_distance}"
            )));
        }
        if !(ris_offset > 0.0 && ris_offset < wall_distance) {
            return Err(Error::Geometry(format!(
                "RIS offset must lie strictly between the walls (0, {wall_distance}), got {ris_offset}"
            )));
        }
        if !(tx_height.is_finite() && tx_height > 0.0) {
            return Err(Error::Geometry(format!("transmit height must be positive, got {tx_height}")));
        }
        if !(rx_height.is_finite() && rx_height > 0.0) {
            return Err(Error::Geometry(format!("receive height must be positive, got {rx_height}")));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Geometry(format!("wavelength must be positive, got {wavelength}")));
        }
        Ok(Self {
            tx,
            rx,
            ris,
            layout,
            wavelength,
        })
    }

    pub fn tx(&self) -> &SurfaceSpec {
        &self.tx
    }

    pub fn rx(&self) -> &SurfaceSpec {
        &self.rx
    }

    pub fn ris(&self) -> &SurfaceSpec {
        &self.ris
    }

    pub fn surface(&self, kind: SurfaceKind) -> &SurfaceSpec {
        match kind {
            SurfaceKind::Tx => &self.tx,
            SurfaceKind::Rx => &self.rx,
            SurfaceKind::Ris => &self.ris,
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn wall_distance(&self) -> f64 {
        self.layout.wall_distance
    }

    pub fn ris_offset(&self) -> f64 {
        self.layout.ris_offset
    }

    pub fn tx_height(&self) -> f64 {
        self.layout.tx_height
    }

    pub fn rx_height(&self) -> f64 {
        self.layout.rx_height
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// `k₀ = 2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Linear index of the element at grid coordinates `(a, b)` (see module docs).
    pub fn grid_index(&self, kind: SurfaceKind, a: usize, b: usize) -> Result<usize> {
        let s = self.surface(kind);
        if a >= s.count_a || b >= s.count_b {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                len: s.count_a.max(s.count_b),
            });
        }
        Ok(match kind {
            SurfaceKind::Tx | SurfaceKind::Rx => b * s.count_a + a,
            SurfaceKind::Ris => a * s.count_b + b,
        })
    }

    /// Inverse of [`grid_index`](Self::grid_index).
    pub fn grid_coords(&self, kind: SurfaceKind, index: usize) -> Result<(usize, usize)> {
        let s = self.surface(kind);
        if index >= s.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: s.len(),
            });
        }
        Ok(match kind {
            SurfaceKind::Tx | SurfaceKind::Rx => (index % s.count_a, index / s.count_a),
            SurfaceKind::Ris => (index / s.count_b, index % s.count_b),
        })
    }

    fn position_at(&self, kind: SurfaceKind, a: usize, b: usize) -> Point3 {
        let s = self.surface(kind);
        let oa = s.axis_offset(a, s.count_a);
        let ob = s.axis_offset(b, s.count_b);
        match kind {
            SurfaceKind::Tx => Point3::new(-self.layout.ris_offset, oa, self.layout.tx_height + ob),
            SurfaceKind::Rx => Point3::new(
                self.layout.wall_distance - self.layout.ris_offset,
                oa,
                self.layout.rx_height + ob,
            ),
            SurfaceKind::Ris => Point3::new(oa, ob, 0.0),
        }
    }

    /// Coordinates of every element of `kind`, in linear index order.
    pub fn element_positions(&self, kind: SurfaceKind) -> Vec<Point3> {
        let s = self.surface(kind);
        (0..s.len())
            .map(|idx| {
                let (a, b) = self
                    .grid_coords(kind, idx)
                    .expect("index within surface bounds");
                self.position_at(kind, a, b)
            })
            .collect()
    }

    pub fn element_position(&self, kind: SurfaceKind, index: usize) -> Result<Point3> {
        let (a, b) = self.grid_coords(kind, index)?;
        Ok(self.position_at(kind, a, b))
    }

    pub fn tx_center(&self) -> Point3 {
        Point3::new(-self.layout.ris_offset, 0.0, self.layout.tx_height)
    }

    pub fn rx_center(&self) -> Point3 {
        Point3::new(
            self.layout.wall_distance - self.layout.ris_offset,
            0.0,
            self.layout.rx_height,
        )
    }

    /// Centre-to-centre distance between the transmit and receive surfaces,
    /// `sqrt(D² + (l_t − l_r)²)`.
    pub fn direct_distance(&self) -> f64 {
        let dh = self.layout.tx_height - self.layout.rx_height;
        (self.layout.wall_distance.powi(2) + dh * dh).sqrt()
    }

    /// Distances from the transmit centre to RIS cell `n` and from cell `n` to the
    /// receive centre.
    pub fn focus_distances(&self, n: usize) -> Result<(f64, f64)> {
        let cell = self.element_position(SurfaceKind::Ris, n)?;
        let Layout {
            wall_distance,
            ris_offset,
            tx_height,
            rx_height,
        } = self.layout;
        let d1 = ((-ris_offset - cell.x).powi(2) + cell.y.powi(2) + tx_height.powi(2)).sqrt();
        let d2 = ((wall_distance - ris_offset - cell.x).powi(2) + cell.y.powi(2) + rx_height.powi(2))
            .sqrt();
        Ok((d1, d2))
    }

    /// First-order (far-field) expansion of [`focus_distances`](Self::focus_distances)
    /// around the RIS centre; linear in the cell's x coordinate.
    pub fn farfield_distances(&self, n: usize) -> Result<(f64, f64)> {
        let cell = self.element_position(SurfaceKind::Ris, n)?;
        let (d1, d2) = self.center_link_distances();
        let Layout {
            wall_distance,
            ris_offset,
            ..
        } = self.layout;
        Ok((
            d1 + ris_offset * cell.x / d1,
            d2 - (wall_distance - ris_offset) * cell.x / d2,
        ))
    }

    /// `(d₁, d₂)`: transmit centre to RIS centre and RIS centre to receive centre.
    pub fn center_link_distances(&self) -> (f64, f64) {
        let Layout {
            wall_distance,
            ris_offset,
            tx_height,
            rx_height,
        } = self.layout;
        (
            (ris_offset.powi(2) + tx_height.powi(2)).sqrt(),
            ((wall_distance - ris_offset).powi(2) + rx_height.powi(2)).sqrt(),
        )
    }
}
