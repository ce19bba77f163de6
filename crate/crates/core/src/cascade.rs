//! Scattering-matrix cascade.
//!
//! Block naming follows the amplitude relation
//! `(C_i^-, C_j^+) = S (C_i^+, C_j^-)` between a left region `i` and a right
//! region `j`. In conventional terms:
//!
//! | block | maps | conventional |
//! |-------|------|--------------|
//! | `pp` (`S^{++}`) | incoming left -> outgoing left  | `r`  |
//! | `mp` (`S^{-+}`) | incoming left -> outgoing right | `t`  |
//! | `pm` (`S^{+-}`) | incoming right -> outgoing left | `t'` |
//! | `mm` (`S^{--}`) | incoming right -> outgoing right| `r'` |

use std::sync::Arc;

use faer::Mat;

use crate::error::{Error, Result};
use crate::floquet::{BasisBuilder, ChannelGrid, LayerBasis, TimeSampling};
use crate::interfaces::{interface_transfer_factored, propagator, FactoredMatching, Propagator};
use crate::linalg::{scale_cols, scale_rows, BlockMatrix, CMat, Lu};
use crate::model::Device;

#[derive(Clone, Debug)]
pub struct ScatterMatrix {
    blocks: BlockMatrix,
}

impl ScatterMatrix {
    pub fn from_blocks(blocks: BlockMatrix) -> Self {
        Self { blocks }
    }

    /// `[[0, I], [I, 0]]`: full transmission, neutral under [`star`].
    pub fn identity(dim: usize) -> Self {
        let mut b = BlockMatrix::zeros(dim);
        b.pm = Mat::identity(dim, dim);
        b.mp = Mat::identity(dim, dim);
        Self { blocks: b }
    }

    pub fn blocks(&self) -> &BlockMatrix {
        &self.blocks
    }

    pub fn into_blocks(self) -> BlockMatrix {
        self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.max_abs()
    }
}

/// `S` from a transfer matrix using only `(T^{--})^{-1}`:
///
/// `S^{++} = -(T^{--})^{-1} T^{-+}`, `S^{+-} = (T^{--})^{-1}`,
/// `S^{-+} = T^{++} - T^{+-} (T^{--})^{-1} T^{-+}`, `S^{--} = T^{+-} (T^{--})^{-1}`.
pub fn transfer_to_scatter(t: &BlockMatrix) -> Result<ScatterMatrix> {
    transfer_to_scatter_at(t, 0)
}

fn transfer_to_scatter_at(t: &BlockMatrix, interface: usize) -> Result<ScatterMatrix> {
    let d = t.dim();
    let lu = Lu::new(t.mm.as_ref());
    if lu.is_singular() {
        return Err(Error::SingularTransfer { interface, ratio: lu.pivot_ratio() });
    }
    let inv_mp = lu.solve(t.mp.as_ref());
    let inv = lu.solve(Mat::identity(d, d).as_ref());
    let blocks = BlockMatrix {
        pp: -&inv_mp,
        mp: &t.pp - &t.pm * &inv_mp,
        mm: &t.pm * &inv,
        pm: inv,
    };
    Ok(ScatterMatrix { blocks })
}

/// Inverse of [`transfer_to_scatter`]; needs `S^{+-}` invertible.
pub fn scatter_to_transfer(s: &ScatterMatrix) -> Result<BlockMatrix> {
    let b = &s.blocks;
    let d = b.dim();
    let lu = Lu::new(b.pm.as_ref());
    if lu.is_singular() {
        return Err(Error::SingularTransfer { interface: 0, ratio: lu.pivot_ratio() });
    }
    let mm = lu.solve(Mat::identity(d, d).as_ref());
    let mp = -(&mm * &b.pp);
    let pm = &b.mm * &mm;
    let pp = &b.mp - &pm * &b.pp;
    Ok(BlockMatrix { pp, pm, mp, mm })
}

/// Slab propagation as an S-factor: no reflection, transmission
/// `diag(exp(i p w))` both ways. Every entry has modulus <= 1.
pub fn propagator_to_scatter(p: &Propagator) -> ScatterMatrix {
    let d = p.factors().len();
    let diag = crate::linalg::diagonal(p.factors());
    let mut b = BlockMatrix::zeros(d);
    b.pm = diag.clone();
    b.mp = diag;
    ScatterMatrix { blocks: b }
}

/// Star product: compose `inner` (regions `i -> k`) with `outer`
/// (regions `k -> j`) into `i -> j`. With `a = inner`, `b = outer` and
/// `Q = (1 - b^{++} a^{--})^{-1}`:
///
/// ```text
/// S^{++} = a^{++} + a^{+-} Q b^{++} a^{-+}
/// S^{+-} = a^{+-} Q b^{+-}
/// S^{-+} = b^{-+} (1 - a^{--} b^{++})^{-1} a^{-+} = b^{-+} (a^{-+} + a^{--} Q b^{++} a^{-+})
/// S^{--} = b^{--} + b^{-+} a^{--} Q b^{+-}
/// ```
///
/// `Q` is factorized once and shared by all four blocks.
pub fn star(outer: &ScatterMatrix, inner: &ScatterMatrix) -> Result<ScatterMatrix> {
    star_at(outer, inner, 0)
}

fn star_at(outer: &ScatterMatrix, inner: &ScatterMatrix, step: usize) -> Result<ScatterMatrix> {
    let a = &inner.blocks;
    let b = &outer.blocks;
    let d = a.dim();
    let q = CMat::identity(d, d) - &b.pp * &a.mm;
    let lu = Lu::new(q.as_ref());
    if lu.is_singular() {
        return Err(Error::ResonanceSingular { step, ratio: lu.pivot_ratio() });
    }
    let x = lu.solve((&b.pp * &a.mp).as_ref());
    let y = lu.solve(b.pm.as_ref());
    let blocks = BlockMatrix {
        pp: &a.pp + &a.pm * &x,
        mp: &b.mp * (&a.mp + &a.mm * &x),
        pm: &a.pm * &y,
        mm: &b.mm + &b.mp * (&a.mm * &y),
    };
    Ok(ScatterMatrix { blocks })
}

/// Star product with a propagator as outer factor, exploiting its diagonal
/// form: `S^{++}` and `S^{+-}` of the inner matrix pass through and the
/// transmitted side picks up `diag(exp(i p w))`.
fn propagate(p: &Propagator, inner: &ScatterMatrix) -> ScatterMatrix {
    let a = &inner.blocks;
    let f = p.factors();
    let blocks = BlockMatrix {
        pp: a.pp.clone(),
        pm: scale_cols(&a.pm, f),
        mp: scale_rows(f, &a.mp),
        mm: scale_cols(&scale_rows(f, &a.mm), f),
    };
    ScatterMatrix { blocks }
}

/// Total scattering matrix of a device plus the diagnostics of the fold.
pub struct Cascade {
    pub scatter: ScatterMatrix,
    /// Largest entry modulus seen in any running product.
    pub peak_magnitude: f64,
    pub first_lead: Arc<LayerBasis>,
    pub last_lead: Arc<LayerBasis>,
    pub cache_hits: usize,
}

/// Regions' bases and factorized matching matrices, reusing identical ones.
struct RegionFactors {
    builder: BasisBuilder,
    recent: Vec<(Arc<LayerBasis>, Arc<FactoredMatching>)>,
}

impl RegionFactors {
    fn new(device: &Device, grid: &ChannelGrid, sampling: TimeSampling) -> Result<Self> {
        Ok(Self {
            builder: BasisBuilder::new(*grid, device.waveform(), sampling)?,
            recent: Vec::new(),
        })
    }

    fn get(&mut self, device: &Device, i: usize) -> Result<(Arc<LayerBasis>, Arc<FactoredMatching>)> {
        let basis = self.builder.basis(&device.regions()[i])?;
        if let Some((b, f)) = self.recent.iter().find(|(b, _)| Arc::ptr_eq(b, &basis)) {
            return Ok((Arc::clone(b), Arc::clone(f)));
        }
        let factored = Arc::new(FactoredMatching::new(&basis));
        if self.recent.len() == 8 {
            self.recent.remove(0);
        }
        self.recent.push((Arc::clone(&basis), Arc::clone(&factored)));
        Ok((basis, factored))
    }
}

/// Fold the device left to right: interface S-matrices interleaved with slab
/// propagators, each composed onto the running product with [`star`]. The
/// edge phases of the two leads are omitted; they cancel in probabilities.
/// Zero-width interior slabs are skipped.
pub fn cascade_device(device: &Device, grid: &ChannelGrid, sampling: TimeSampling) -> Result<Cascade> {
    let mut factors = RegionFactors::new(device, grid, sampling)?;
    let regions = device.regions();
    let last = regions.len() - 1;
    let (first_lead, mut prev) = factors.get(device, 0)?;
    let mut prev_basis = Arc::clone(&first_lead);
    let mut acc: Option<ScatterMatrix> = None;
    let mut peak = 0.0f64;
    let mut step = 0usize;
    let mut last_lead = Arc::clone(&first_lead);
    for i in 1..=last {
        if i < last && regions[i].width == 0.0 {
            // a slab of zero width has no effect in the continuum; skip it exactly
            continue;
        }
        let (basis, current) = factors.get(device, i)?;
        let s = if Arc::ptr_eq(&prev_basis, &basis) {
            // matching a region to itself
            ScatterMatrix::identity(grid.len())
        } else {
            let t = interface_transfer_factored(&prev, &current, i)?;
            transfer_to_scatter_at(&t, i - 1)?
        };
        let mut running = match acc {
            None => s,
            Some(a) => {
                step += 1;
                star_at(&s, &a, step)?
            }
        };
        if i < last {
            let p = propagator(&basis, regions[i].width)?;
            running = propagate(&p, &running);
        }
        let m = running.max_abs();
        if !m.is_finite() {
            return Err(Error::NonFinite("scattering cascade"));
        }
        peak = peak.max(m);
        acc = Some(running);
        prev = current;
        prev_basis = Arc::clone(&basis);
        last_lead = basis;
    }
    Ok(Cascade {
        scatter: acc.expect("device has at least one interface"),
        peak_magnitude: peak,
        first_lead,
        last_lead,
        cache_hits: factors.builder.cache_hits(),
    })
}

/// Reference route: multiply transfer matrices and propagators directly and
/// convert once at the end. Unstable for long stacks with closed channels.
pub fn transfer_product(device: &Device, grid: &ChannelGrid, sampling: TimeSampling) -> Result<BlockMatrix> {
    let mut factors = RegionFactors::new(device, grid, sampling)?;
    let regions = device.regions();
    let last = regions.len() - 1;
    let (_, mut prev) = factors.get(device, 0)?;
    let mut total = BlockMatrix::identity(grid.len());
    for i in 1..=last {
        if i < last && regions[i].width == 0.0 {
            continue;
        }
        let (basis, current) = factors.get(device, i)?;
        let t = interface_transfer_factored(&prev, &current, i)?;
        total = t.mul(&total);
        if i < last {
            total = propagator(&basis, regions[i].width)?.as_transfer().mul(&total);
        }
        prev = current;
    }
    if !total.is_finite() {
        return Err(Error::NonFinite("transfer product"));
    }
    Ok(total)
}

/// [`transfer_product`] converted to scattering form, with the lead bases.
pub fn transfer_product_scatter(device: &Device, grid: &ChannelGrid, sampling: TimeSampling) -> Result<Cascade> {
    let t = transfer_product(device, grid, sampling)?;
    let scatter = transfer_to_scatter_at(&t, 0)?;
    let builder = BasisBuilder::new(*grid, device.waveform(), sampling)?;
    let regions = device.regions();
    Ok(Cascade {
        peak_magnitude: t.max_abs(),
        scatter,
        first_lead: builder.basis(&regions[0])?,
        last_lead: builder.basis(&regions[regions.len() - 1])?,
        cache_hits: 0,
    })
}
