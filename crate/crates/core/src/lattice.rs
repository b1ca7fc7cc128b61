//! 2D grid container with checkerboard coloring, neighbor addressing and
//! boundary buffers.
//!
//! Storage is row-major with y increasing downward, matching the image
//! output. The boundary buffer walks the edge cells clockwise starting at
//! (0, 0); that ordering is part of the stable contract.

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDims {
    pub width: usize,
    pub height: usize,
}

impl GridDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidDims { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn sites(&self) -> usize {
        self.width * self.height
    }

    /// Number of edge cells: 2*(w+h) - 4.
    pub fn boundary_len(&self) -> usize {
        2 * (self.width + self.height) - 4
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.width, site / self.width)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Black iff x + y is even.
pub fn parity(x: usize, y: usize) -> Color {
    if (x + y) % 2 == 0 {
        Color::Black
    } else {
        Color::White
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Wraparound; every site has exactly 4 neighbors.
    Periodic,
    /// Out-of-range neighbors are absent; edge sites have 2-3 neighbors.
    Clamped,
}

/// Neighbor coordinates of (x, y) in fixed N, E, S, W order.
pub fn neighbors(x: usize, y: usize, dims: GridDims, mode: BoundaryMode) -> Result<Vec<(usize, usize)>> {
    if !dims.contains(x, y) {
        return Err(Error::OutOfRange {
            x,
            y,
            width: dims.width,
            height: dims.height,
        });
    }
    let (w, h) = (dims.width, dims.height);
    let mut out = Vec::with_capacity(4);
    match mode {
        BoundaryMode::Periodic => {
            out.push((x, (y + h - 1) % h));
            out.push(((x + 1) % w, y));
            out.push((x, (y + 1) % h));
            out.push(((x + w - 1) % w, y));
        }
        BoundaryMode::Clamped => {
            if y > 0 {
                out.push((x, y - 1));
            }
            if x + 1 < w {
                out.push((x + 1, y));
            }
            if y + 1 < h {
                out.push((x, y + 1));
            }
            if x > 0 {
                out.push((x - 1, y));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    dims: GridDims,
    cells: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn new(dims: GridDims, fill: T) -> Self {
        Self {
            cells: vec![fill; dims.sites()],
            dims,
        }
    }

    pub fn from_cells(dims: GridDims, cells: Vec<T>) -> Self {
        assert_eq!(cells.len(), dims.sites());
        Self { dims, cells }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.cells[self.dims.index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        let i = self.dims.index(x, y);
        self.cells[i] = value;
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [T] {
        &mut self.cells
    }

    /// Edge coordinates clockwise from (0,0): top row left to right, right
    /// column downward, bottom row right to left, left column upward.
    fn boundary_coords(dims: GridDims) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (dims.width, dims.height);
        let top = (0..w).map(move |x| (x, 0usize));
        let right = (1..h).map(move |y| (w - 1, y));
        let bottom = (1..w).rev().map(move |x| (x - 1, h - 1));
        let left = (1..h - 1).rev().map(move |y| (0usize, y));
        top.chain(right).chain(bottom).chain(left)
    }

    pub fn extract_boundary(&self) -> BoundaryBuffer<T> {
        let cells = Self::boundary_coords(self.dims)
            .map(|(x, y)| self.get(x, y).clone())
            .collect();
        BoundaryBuffer {
            dims: self.dims,
            cells,
        }
    }

    pub fn inject_boundary(&mut self, buffer: &BoundaryBuffer<T>) -> Result<()> {
        if buffer.dims != self.dims {
            return Err(Error::BufferDimsMismatch {
                buf_width: buffer.dims.width,
                buf_height: buffer.dims.height,
                width: self.dims.width,
                height: self.dims.height,
            });
        }
        for ((x, y), cell) in Self::boundary_coords(self.dims).zip(buffer.cells.iter()) {
            self.set(x, y, cell.clone());
        }
        Ok(())
    }
}

/// The edge cells of a grid in the fixed clockwise order; the staging
/// buffer for halo-style boundary exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryBuffer<T> {
    pub dims: GridDims,
    pub cells: Vec<T>,
}

impl<T> BoundaryBuffer<T> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Render a grid as a binary PPM (P6) image, row 0 at the top. The
/// palette maps each cell value to an RGB triple; byte-exact for a given
/// grid and palette.
pub fn write_ppm<T, F, W>(grid: &Grid<T>, palette: F, out: &mut W) -> Result<()>
where
    T: Clone,
    F: Fn(&T) -> Option<[u8; 3]>,
    W: Write,
{
    let dims = grid.dims();
    write!(out, "P6\n{} {}\n255\n", dims.width, dims.height)?;
    let mut bytes = Vec::with_capacity(dims.sites() * 3);
    for (site, cell) in grid.cells().iter().enumerate() {
        let rgb = palette(cell).ok_or(Error::UnmappableCell { site })?;
        bytes.extend_from_slice(&rgb);
    }
    out.write_all(&bytes)?;
    Ok(())
}

/// `write_ppm` to a file path.
pub fn export_image<T, F>(grid: &Grid<T>, palette: F, path: &Path) -> Result<()>
where
    T: Clone,
    F: Fn(&T) -> Option<[u8; 3]>,
{
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_ppm(grid, palette, &mut file)?;
    file.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(())
}
