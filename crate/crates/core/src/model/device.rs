use serde::{Deserialize, Serialize};

use super::Waveform;
use crate::error::{Error, Result};

/// One homogeneous slab. Leads have infinite width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub mass: f64,
    pub potential: f64,
    /// Multiplier on the global laser amplitude inside this region.
    pub field_scale: f64,
    pub width: f64,
}

impl Region {
    pub fn lead(mass: f64, potential: f64) -> Self {
        Self {
            mass,
            potential,
            field_scale: 1.0,
            width: f64::INFINITY,
        }
    }

    pub fn slab(mass: f64, potential: f64, width: f64) -> Self {
        Self {
            mass,
            potential,
            field_scale: 1.0,
            width,
        }
    }

    pub fn with_field_scale(mut self, scale: f64) -> Self {
        self.field_scale = scale;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    #[default]
    Left,
    Right,
}

impl Incidence {
    pub fn flipped(self) -> Self {
        match self {
            Incidence::Left => Incidence::Right,
            Incidence::Right => Incidence::Left,
        }
    }
}

/// Three barriers of width `barrier_width` separated by two wells of width
/// `well_width`. Leads are made of well material at zero potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleBarrier {
    pub well_width: f64,
    pub barrier_width: f64,
    pub barrier_height: f64,
    pub well_mass: f64,
    pub barrier_mass: f64,
}

impl TripleBarrier {
    pub fn length(&self) -> f64 {
        3.0 * self.barrier_width + 2.0 * self.well_width
    }

    /// Laser concentrated in the structure: full amplitude in the wells and
    /// the middle barrier, half in the edge barriers, none in the leads.
    pub fn confined_field_profile() -> Vec<f64> {
        vec![0.0, 0.5, 1.0, 1.0, 1.0, 0.5, 0.0]
    }
}

/// Ordered regions plus the drive. Interfaces sit at `origin` and then at the
/// cumulative widths of the interior regions.
#[derive(Clone, Debug)]
pub struct Device {
    regions: Vec<Region>,
    origin: f64,
    waveform: Waveform,
    static_field: f64,
    incidence: Incidence,
}

impl Device {
    /// Interior widths may be zero; zero-width slabs are neutral in the cascade.
    pub fn new(regions: Vec<Region>, origin: f64) -> Result<Self> {
        if regions.len() < 2 {
            return Err(Error::InvalidGeometry("need at least two regions".into()));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGeometry("origin must be finite".into()));
        }
        let last = regions.len() - 1;
        for (i, r) in regions.iter().enumerate() {
            if !(r.mass > 0.0 && r.mass.is_finite()) {
                return Err(Error::InvalidGeometry(format!("region {i}: mass {} must be positive", r.mass)));
            }
            if !r.potential.is_finite() || !r.field_scale.is_finite() {
                return Err(Error::InvalidGeometry(format!("region {i}: non-finite parameter")));
            }
            let lead = i == 0 || i == last;
            if lead && r.width != f64::INFINITY {
                return Err(Error::InvalidGeometry(format!("region {i}: leads must have infinite width")));
            }
            if !lead && !(r.width >= 0.0 && r.width.is_finite()) {
                return Err(Error::InvalidGeometry(format!("region {i}: width {} must be finite and >= 0", r.width)));
            }
        }
        Ok(Self {
            regions,
            origin,
            waveform: Waveform::off(),
            static_field: 0.0,
            incidence: Incidence::Left,
        })
    }

    pub fn triple_barrier(params: &TripleBarrier) -> Result<Self> {
        let TripleBarrier {
            well_width: a,
            barrier_width: b,
            barrier_height: v0,
            well_mass,
            barrier_mass,
        } = *params;
        for (name, v) in [("well width", a), ("barrier width", b), ("barrier height", v0), ("well mass", well_mass), ("barrier mass", barrier_mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGeometry(format!("{name} {v} must be positive")));
            }
        }
        let barrier = Region::slab(barrier_mass, v0, b);
        let well = Region::slab(well_mass, 0.0, a);
        Self::new(
            vec![
                Region::lead(well_mass, 0.0),
                barrier,
                well,
                barrier,
                well,
                barrier,
                Region::lead(well_mass, 0.0),
            ],
            0.0,
        )
    }

    /// Rectangular barrier of `width` and `height` between leads of `lead_mass`.
    pub fn single_barrier(width: f64, height: f64, lead_mass: f64, barrier_mass: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidGeometry(format!("barrier width {width} must be positive")));
        }
        Self::new(
            vec![
                Region::lead(lead_mass, 0.0),
                Region::slab(barrier_mass, height, width),
                Region::lead(lead_mass, 0.0),
            ],
            0.0,
        )
    }

    /// Homogeneous space, represented by one trivial interface at the origin.
    pub fn uniform(mass: f64, potential: f64) -> Result<Self> {
        Self::new(vec![Region::lead(mass, potential), Region::lead(mass, potential)], 0.0)
    }

    pub fn with_waveform(mut self, waveform: Waveform) -> Self {
        self.waveform = waveform;
        self
    }

    pub fn with_incidence(mut self, incidence: Incidence) -> Self {
        self.incidence = incidence;
        self
    }

    /// Per-region laser multipliers, one per region.
    pub fn with_field_profile(mut self, profile: &[f64]) -> Result<Self> {
        if profile.len() != self.regions.len() {
            return Err(Error::InvalidGeometry(format!(
                "field profile has {} entries for {} regions",
                profile.len(),
                self.regions.len()
            )));
        }
        if profile.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidGeometry("field profile must be finite".into()));
        }
        for (r, &s) in self.regions.iter_mut().zip(profile) {
            r.field_scale = s;
        }
        Ok(self)
    }

    pub fn translated(mut self, offset: f64) -> Self {
        self.origin += offset;
        self
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn static_field(&self) -> f64 {
        self.static_field
    }

    pub fn incidence(&self) -> Incidence {
        self.incidence
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn interface_count(&self) -> usize {
        self.regions.len() - 1
    }

    /// `x_0 .. x_{L-1}`.
    pub fn interface_positions(&self) -> Vec<f64> {
        let mut x = self.origin;
        let mut out = Vec::with_capacity(self.interface_count());
        out.push(x);
        for r in &self.regions[1..self.regions.len() - 1] {
            x += r.width;
            out.push(x);
        }
        out
    }

    pub fn interior_length(&self) -> f64 {
        self.regions[1..self.regions.len() - 1].iter().map(|r| r.width).sum()
    }

    /// The lead the electron comes from.
    pub fn incident_lead(&self) -> &Region {
        match self.incidence {
            Incidence::Left => &self.regions[0],
            Incidence::Right => self.regions.last().unwrap(),
        }
    }

    /// The lead the transmitted electron leaves through.
    pub fn exit_lead(&self) -> &Region {
        match self.incidence {
            Incidence::Left => self.regions.last().unwrap(),
            Incidence::Right => &self.regions[0],
        }
    }

    /// Reverse region order and flip the incidence side.
    pub fn mirrored(&self) -> Self {
        let mut regions = self.regions.clone();
        regions.reverse();
        Self {
            regions,
            origin: self.origin,
            waveform: self.waveform.clone(),
            static_field: self.static_field,
            incidence: self.incidence.flipped(),
        }
    }

    /// Replace the interior `[x_0, x_{L-1}]` by `n_points - 1` equal slabs whose
    /// potential is `V(x_c) + F x_c` at the slab midpoint `x_c`. Mass and laser
    /// multiplier come from the original region holding the midpoint. Leads are
    /// pinned at their boundary values `V + F x_0` and `V + F x_{L-1}`.
    pub fn discretize_stark(&self, field: f64, n_points: usize) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::Staircase(format!("field {field} is not finite")));
        }
        let interfaces = self.interface_positions();
        if n_points < 2 || n_points < interfaces.len() {
            return Err(Error::Staircase(format!(
                "{n_points} points cannot resolve {} interfaces",
                interfaces.len()
            )));
        }
        let x0 = interfaces[0];
        let x_end = *interfaces.last().unwrap();
        let length = x_end - x0;
        let last = self.regions.len() - 1;
        let mut left = self.regions[0];
        let mut right = self.regions[last];
        left.potential += field * x0;
        right.potential += field * x_end;

        let mut regions = Vec::with_capacity(n_points + 1);
        regions.push(left);
        if length > 0.0 {
            let slabs = n_points - 1;
            let h = length / slabs as f64;
            let mut hits = vec![0usize; self.regions.len()];
            for k in 0..slabs {
                let xc = x0 + (k as f64 + 0.5) * h;
                // region i spans (x_{i-1}, x_i)
                let i = interfaces.partition_point(|&x| x <= xc).clamp(1, last - 1);
                hits[i] += 1;
                let parent = self.regions[i];
                regions.push(Region {
                    mass: parent.mass,
                    potential: parent.potential + field * xc,
                    field_scale: parent.field_scale,
                    width: h,
                });
            }
            if let Some(i) = (1..last).find(|&i| hits[i] == 0 && self.regions[i].width > 0.0) {
                return Err(Error::Staircase(format!(
                    "{n_points} points leave region {i} (width {:e}) without a slab; use a finer grid",
                    self.regions[i].width
                )));
            }
        }
        regions.push(right);
        let mut device = Self::new(regions, x0)?;
        device.waveform = self.waveform.clone();
        device.static_field = self.static_field + field;
        device.incidence = self.incidence;
        Ok(device)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{angstrom_to_bohr, mev_to_hartree};

    fn gaas_triple(a: f64, b: f64) -> TripleBarrier {
        TripleBarrier {
            well_width: angstrom_to_bohr(a),
            barrier_width: angstrom_to_bohr(b),
            barrier_height: mev_to_hartree(237.0),
            well_mass: 0.0667,
            barrier_mass: 0.0918,
        }
    }

    #[test]
    fn triple_barrier_layout() {
        let d = Device::triple_barrier(&gaas_triple(40.0, 20.0)).unwrap();
        assert_eq!(d.regions().len(), 7);
        assert!((d.interior_length() - angstrom_to_bohr(140.0)).abs() < 1e-12);
        assert_eq!(d.regions()[0].potential, 0.0);
        assert_eq!(d.regions()[0].mass, 0.0667);
        assert_eq!(d.regions()[1].mass, 0.0918);
        let d = Device::triple_barrier(&gaas_triple(70.0, 20.0)).unwrap();
        assert!((d.interior_length() - angstrom_to_bohr(200.0)).abs() < 1e-12);
        let x = d.interface_positions();
        assert_eq!(x.len(), 6);
        assert!(x.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn equal_widths_when_a_equals_b() {
        let d = Device::triple_barrier(&gaas_triple(30.0, 30.0)).unwrap();
        let w = d.regions()[1].width;
        assert!(d.regions()[1..6].iter().all(|r| r.width == w));
    }

    #[test]
    fn rejects_bad_geometry() {
        let mut s = gaas_triple(40.0, 20.0);
        s.barrier_width = 0.0;
        assert!(matches!(Device::triple_barrier(&s), Err(Error::InvalidGeometry(_))));
        let mut s = gaas_triple(40.0, 20.0);
        s.well_mass = -1.0;
        assert!(Device::triple_barrier(&s).is_err());
        assert!(Device::new(vec![Region::lead(1.0, 0.0)], 0.0).is_err());
        assert!(Device::new(vec![Region::lead(1.0, 0.0), Region::slab(1.0, 0.0, 1.0)], 0.0).is_err());
    }

    #[test]
    fn zero_field_staircase_is_flat() {
        let d = Device::triple_barrier(&gaas_triple(40.0, 20.0)).unwrap();
        let s = d.discretize_stark(0.0, 141).unwrap();
        assert_eq!(s.regions().len(), 142);
        for r in &s.regions()[1..141] {
            assert!(r.potential == 0.0 || r.potential == mev_to_hartree(237.0));
        }
        let barrier_slabs = s.regions()[1..141].iter().filter(|r| r.mass == 0.0918).count();
        assert_eq!(barrier_slabs, 60);
    }

    #[test]
    fn staircase_drop_matches_field_times_length() {
        let d = Device::triple_barrier(&gaas_triple(40.0, 20.0)).unwrap();
        let f = -0.23e-4;
        let s = d.discretize_stark(f, 141).unwrap();
        let r = s.regions();
        let drop = r.last().unwrap().potential - r[0].potential;
        assert!((drop - f * angstrom_to_bohr(140.0)).abs() < 1e-15);
        // steps inside a homogeneous layer are F h
        let h = angstrom_to_bohr(1.0);
        assert!(((r[2].potential - r[1].potential) - f * h).abs() < 1e-15);
        assert_eq!(s.static_field(), f);
    }

    #[test]
    fn staircase_refuses_coarse_grids() {
        let d = Device::triple_barrier(&gaas_triple(40.0, 20.0)).unwrap();
        assert!(matches!(d.discretize_stark(1e-5, 5), Err(Error::Staircase(_))));
        // 7 points: no slab midpoint lands in the middle barrier
        assert!(matches!(d.discretize_stark(1e-5, 7), Err(Error::Staircase(_))));
        assert!(d.discretize_stark(1e-5, 15).is_ok());
        assert!(d.discretize_stark(f64::NAN, 141).is_err());
    }

    #[test]
    fn mirror_twice_is_identity() {
        let d = Device::triple_barrier(&gaas_triple(40.0, 20.0)).unwrap();
        let m = d.mirrored().mirrored();
        assert_eq!(m.regions(), d.regions());
        assert_eq!(m.incidence(), d.incidence());
        assert_eq!(d.mirrored().incidence(), Incidence::Right);
    }
}
