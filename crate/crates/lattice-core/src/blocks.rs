//! Block hierarchy on the torus and polymers (finite block sets).
//!
//! At scale `j` the torus tiles exactly into cubes of side `base^j`; a
//! polymer is any subset of those cubes. Two blocks of side `s` count as
//! connected when the gap between them is smaller than `s`, where the gap
//! along an axis is the number of lattice sites strictly between the two
//! intervals (0 for touching or diagonal contact) and the gap of a pair of
//! blocks is the maximum over axes. Connected components of a polymer are
//! therefore pairwise separated by at least the block side.

use crate::{LatticeError, Result, TorusLattice};
use std::collections::BTreeSet;

/// A set of scale-`scale` blocks, identified by their ids in the block grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polymer {
    pub scale: usize,
    pub blocks: BTreeSet<usize>,
}

impl Polymer {
    pub fn new(scale: usize, blocks: impl IntoIterator<Item = usize>) -> Self {
        Self {
            scale,
            blocks: blocks.into_iter().collect(),
        }
    }

    pub fn empty(scale: usize) -> Self {
        Self {
            scale,
            blocks: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl TorusLattice {
    fn check_scale(&self, scale: usize) -> Result<()> {
        if scale > self.scales() {
            return Err(LatticeError::BadScale {
                scale,
                max: self.scales(),
            });
        }
        Ok(())
    }

    /// Side length of a scale-`j` block.
    pub fn block_side(&self, scale: usize) -> usize {
        self.base().pow(scale as u32)
    }

    /// Number of blocks per axis at a scale.
    pub fn blocks_per_axis(&self, scale: usize) -> usize {
        self.period() / self.block_side(scale)
    }

    /// Total number of scale-`j` blocks; the grid tiles the torus exactly.
    pub fn block_count(&self, scale: usize) -> usize {
        self.blocks_per_axis(scale).pow(self.dim() as u32)
    }

    /// Lattice coordinates of a block's lower corner.
    pub fn block_corner(&self, scale: usize, id: usize) -> Vec<usize> {
        let per_axis = self.blocks_per_axis(scale);
        let side = self.block_side(scale);
        let mut rest = id;
        let mut corner = vec![0; self.dim()];
        for a in 0..self.dim() {
            corner[a] = (rest % per_axis) * side;
            rest /= per_axis;
        }
        corner
    }

    /// Block id of the scale-`j` block containing `site`.
    pub fn block_of_site(&self, scale: usize, site: usize) -> usize {
        let per_axis = self.blocks_per_axis(scale);
        let side = self.block_side(scale);
        let coords = self.site_coords(site);
        let mut id = 0;
        for a in (0..self.dim()).rev() {
            id = id * per_axis + coords[a] / side;
        }
        id
    }

    /// All sites of a block, in index order.
    pub fn block_sites(&self, scale: usize, id: usize) -> Vec<usize> {
        let side = self.block_side(scale);
        let corner = self.block_corner(scale, id);
        let mut sites = Vec::with_capacity(side.pow(self.dim() as u32));
        let mut offset = vec![0usize; self.dim()];
        loop {
            let coords: Vec<usize> = (0..self.dim())
                .map(|a| (corner[a] + offset[a]) % self.period())
                .collect();
            sites.push(self.site_index(&coords));
            // odometer over the block cube
            let mut a = 0;
            loop {
                if a == self.dim() {
                    sites.sort_unstable();
                    return sites;
                }
                offset[a] += 1;
                if offset[a] < side {
                    break;
                }
                offset[a] = 0;
                a += 1;
            }
        }
    }

    /// Id of the scale-`j+1` block containing the given scale-`j` block.
    pub fn parent_block(&self, scale: usize, id: usize) -> usize {
        let corner = self.block_corner(scale, id);
        let parent_side = self.block_side(scale + 1);
        let per_axis = self.blocks_per_axis(scale + 1);
        let mut pid = 0;
        for a in (0..self.dim()).rev() {
            pid = pid * per_axis + corner[a] / parent_side;
        }
        pid
    }

    fn axis_gap(&self, a: usize, b: usize, side: usize) -> usize {
        // Sites strictly between the intervals [a, a+side) and [b, b+side)
        // on the circle, taking the shorter way around; 0 when they touch.
        let delta = (b + self.period() - a) % self.period();
        let up = delta.saturating_sub(side);
        let down = (self.period() - delta).saturating_sub(side);
        if delta == 0 {
            0
        } else {
            up.min(down)
        }
    }

    /// Torus gap between two same-scale blocks: max over axes of the per-axis
    /// gap between their coordinate intervals.
    pub fn block_distance(&self, scale: usize, x: usize, y: usize) -> usize {
        let side = self.block_side(scale);
        let cx = self.block_corner(scale, x);
        let cy = self.block_corner(scale, y);
        (0..self.dim())
            .map(|a| self.axis_gap(cx[a], cy[a], side))
            .max()
            .unwrap_or(0)
    }

    fn check_polymer(&self, p: &Polymer) -> Result<()> {
        self.check_scale(p.scale)?;
        let count = self.block_count(p.scale);
        if let Some(&id) = p.blocks.iter().find(|&&id| id >= count) {
            return Err(LatticeError::BadBlockId {
                scale: p.scale,
                id,
                count,
            });
        }
        Ok(())
    }
}

/// Smallest polymer of scale `j+1` blocks covering a scale-`j` polymer.
pub fn closure(torus: &TorusLattice, polymer: &Polymer) -> Result<Polymer> {
    torus.check_polymer(polymer)?;
    if polymer.scale >= torus.scales() {
        return Err(LatticeError::AboveTopScale(torus.scales()));
    }
    let parents = polymer
        .blocks
        .iter()
        .map(|&id| torus.parent_block(polymer.scale, id));
    Ok(Polymer {
        scale: polymer.scale + 1,
        blocks: parents.collect(),
    })
}

/// Splits a polymer into connected components: blocks at gap < block side are
/// joined transitively. Components come back ordered by their smallest block
/// id.
pub fn connected_components(torus: &TorusLattice, polymer: &Polymer) -> Result<Vec<Polymer>> {
    torus.check_polymer(polymer)?;
    let side = torus.block_side(polymer.scale);
    let ids: Vec<usize> = polymer.blocks.iter().copied().collect();
    let n = ids.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if torus.block_distance(polymer.scale, ids[i], ids[j]) < side {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Polymer> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        comps
            .entry(ids[root])
            .or_insert_with(|| Polymer::empty(polymer.scale))
            .blocks
            .insert(ids[i]);
    }
    let mut out: Vec<Polymer> = comps.into_values().collect();
    out.sort_by_key(|p| *p.blocks.iter().next().unwrap());
    Ok(out)
}
