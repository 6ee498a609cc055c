//! Camera footprint and virtual-leader formation geometry.
//!
//! Each follower carries a camera pointed along the body x-axis at the
//! surface. Footprints are `w × h` rectangles in the (y, z) plane of the
//! leader frame, so every offset has a zero x-component.

use crate::error::{PlanError, Result};
use crate::geom::Vec3;
use crate::scalar::{from_usize, lit, sign_with_tol, Scalar};

/// Sine/cosine values this close to zero are treated as exactly zero.
const SIGN_DEAD_BAND: f64 = 1e-12;

/// Camera intrinsics plus the working distance to the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraSpec<T> {
    /// Field-of-view angle paired with the footprint height (radians).
    pub alpha: T,
    /// Field-of-view angle paired with the footprint width (radians).
    pub beta: T,
    /// Standoff from the surface in meters.
    pub working_distance: T,
}

impl<T: Scalar> CameraSpec<T> {
    pub fn from_degrees(alpha_deg: T, beta_deg: T, working_distance: T) -> Self {
        Self {
            alpha: alpha_deg.to_radians(),
            beta: beta_deg.to_radians(),
            working_distance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pi = T::PI();
        for (name, a) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(a > T::zero() && a < pi) {
                return Err(PlanError::InvalidCamera(format!("{name} = {a} rad must lie in (0, pi)")));
            }
        }
        if !(self.working_distance > T::zero()) || !self.working_distance.is_finite() {
            return Err(PlanError::InvalidCamera(format!(
                "working distance {} must be positive",
                self.working_distance
            )));
        }
        Ok(())
    }
}

/// Rectangle imaged by one camera at the working distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint<T> {
    pub height: T,
    pub width: T,
}

/// Footprint of a single camera: `h = 2d·tan(α/2)`, `w = 2d·tan(β/2)`.
pub fn camera_footprint<T: Scalar>(cam: &CameraSpec<T>) -> Result<Footprint<T>> {
    cam.validate()?;
    let two_d = cam.working_distance + cam.working_distance;
    let half = lit::<T>(0.5);
    Ok(Footprint {
        height: two_d * (cam.alpha * half).tan(),
        width: two_d * (cam.beta * half).tan(),
    })
}

fn check_overlap<T: Scalar>(name: &str, overlap: T, limit: T) -> Result<()> {
    if overlap > T::zero() && overlap <= limit {
        Ok(())
    } else {
        Err(PlanError::OverlapOutOfRange(format!(
            "{name} = {overlap} must lie in (0, {limit}]"
        )))
    }
}

/// Offset from footprint center `B_i` to a neighbor `B_j`.
///
/// `gamma` is the angle between `B_iB_j` and the z-axis, so `gamma = 0` is the
/// neighbor directly above and `gamma = π/2` the neighbor to the right. The
/// sign of a sine or cosine within 1e-12 of zero is zero.
pub fn pair_offset<T: Scalar>(fp: &Footprint<T>, overlap_w: T, overlap_h: T, gamma: T) -> Result<Vec3<T>> {
    check_overlap("overlap_w", overlap_w, fp.width)?;
    check_overlap("overlap_h", overlap_h, fp.height)?;
    let tol = lit(SIGN_DEAD_BAND);
    Ok(Vec3::new(
        T::zero(),
        (fp.width - overlap_w) * sign_with_tol(gamma.sin(), tol),
        (fp.height - overlap_h) * sign_with_tol(gamma.cos(), tol),
    ))
}

/// A rows × cols grid of cameras flown around a virtual leader.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationSpec<T> {
    pub rows: usize,
    pub cols: usize,
    pub pair_overlap_w: T,
    pub pair_overlap_h: T,
    /// Single-camera footprint.
    pub camera: Footprint<T>,
    /// Leader-to-UAV vectors, row-major with row 0 at the bottom.
    pub offsets: Vec<Vec3<T>>,
    pub footprint_w: T,
    pub footprint_h: T,
}

impl<T: Scalar> FormationSpec<T> {
    pub fn uav_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Width and height of the union of the footprints placed at `offsets`.
    pub fn union_extent(&self) -> (T, T) {
        union_extent(&self.camera, &self.offsets)
    }
}

fn union_extent<T: Scalar>(fp: &Footprint<T>, offsets: &[Vec3<T>]) -> (T, T) {
    let half_w = fp.width * lit(0.5);
    let half_h = fp.height * lit(0.5);
    let (mut y0, mut y1, mut z0, mut z1) = (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity());
    for o in offsets {
        y0 = y0.min(o.y - half_w);
        y1 = y1.max(o.y + half_w);
        z0 = z0.min(o.z - half_h);
        z1 = z1.max(o.z + half_h);
    }
    (y1 - y0, z1 - z0)
}

/// Chains pair offsets across the grid and recenters on the union centroid.
///
/// With `column_major` the chain climbs each column before moving right;
/// otherwise it sweeps each row first. Both orders give the same result.
fn chain_offsets<T: Scalar>(
    fp: &Footprint<T>,
    rows: usize,
    cols: usize,
    overlap_w: T,
    overlap_h: T,
    column_major: bool,
) -> Result<Vec<Vec3<T>>> {
    // validation already done; use dummy valid overlaps for unused directions
    let ow = if cols > 1 { overlap_w } else { fp.width };
    let oh = if rows > 1 { overlap_h } else { fp.height };
    let right = pair_offset(fp, ow, oh, T::FRAC_PI_2())?;
    let up = pair_offset(fp, ow, oh, T::zero())?;

    let mut offsets = vec![Vec3::zero(); rows * cols];
    let idx = |r: usize, c: usize| r * cols + c;
    if column_major {
        for c in 0..cols {
            for r in 0..rows {
                offsets[idx(r, c)] = match (r, c) {
                    (0, 0) => Vec3::zero(),
                    (0, _) => offsets[idx(0, c - 1)] + right,
                    _ => offsets[idx(r - 1, c)] + up,
                };
            }
        }
    } else {
        for r in 0..rows {
            for c in 0..cols {
                offsets[idx(r, c)] = match (r, c) {
                    (0, 0) => Vec3::zero(),
                    (_, 0) => offsets[idx(r - 1, 0)] + up,
                    _ => offsets[idx(r, c - 1)] + right,
                };
            }
        }
    }

    let half = lit::<T>(0.5);
    let center = Vec3::new(
        T::zero(),
        right.y * from_usize::<T>(cols - 1) * half,
        up.z * from_usize::<T>(rows - 1) * half,
    );
    for o in &mut offsets {
        *o -= center;
    }
    Ok(offsets)
}

/// Lays out `rows × cols` cameras with the given neighbor overlaps.
pub fn build_formation<T: Scalar>(
    cam: &CameraSpec<T>,
    rows: usize,
    cols: usize,
    overlap_w: T,
    overlap_h: T,
) -> Result<FormationSpec<T>> {
    if rows == 0 || cols == 0 {
        return Err(PlanError::param("rows/cols", "formation grid needs at least one row and one column"));
    }
    let fp = camera_footprint(cam)?;
    if cols > 1 {
        check_overlap("overlap_w", overlap_w, fp.width)?;
    }
    if rows > 1 {
        check_overlap("overlap_h", overlap_h, fp.height)?;
    }
    let offsets = chain_offsets(&fp, rows, cols, overlap_w, overlap_h, false)?;
    let n_cols = from_usize::<T>(cols);
    let n_rows = from_usize::<T>(rows);
    let footprint_w = if cols > 1 {
        n_cols * fp.width - (n_cols - T::one()) * overlap_w
    } else {
        fp.width
    };
    let footprint_h = if rows > 1 {
        n_rows * fp.height - (n_rows - T::one()) * overlap_h
    } else {
        fp.height
    };
    Ok(FormationSpec {
        rows,
        cols,
        pair_overlap_w: overlap_w,
        pair_overlap_h: overlap_h,
        camera: fp,
        offsets,
        footprint_w,
        footprint_h,
    })
}

/// Distances between consecutive viewpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingSpec<T> {
    pub delta_w: T,
    pub delta_h: T,
    pub stitch_overlap_w: T,
    pub stitch_overlap_h: T,
}

/// Default stitch overlap as a fraction of the formation footprint.
pub const DEFAULT_STITCH_FRACTION: f64 = 0.1;

/// `δ_w = w_f − w_o`, `δ_h = h_f − h_o`.
pub fn viewpoint_spacing<T: Scalar>(
    fs: &FormationSpec<T>,
    stitch_overlap_w: T,
    stitch_overlap_h: T,
) -> Result<SpacingSpec<T>> {
    for (name, o, limit) in [
        ("stitch_overlap_w", stitch_overlap_w, fs.footprint_w),
        ("stitch_overlap_h", stitch_overlap_h, fs.footprint_h),
    ] {
        if !(o >= T::zero() && o < limit) {
            return Err(PlanError::OverlapOutOfRange(format!("{name} = {o} must lie in [0, {limit})")));
        }
    }
    Ok(SpacingSpec {
        delta_w: fs.footprint_w - stitch_overlap_w,
        delta_h: fs.footprint_h - stitch_overlap_h,
        stitch_overlap_w,
        stitch_overlap_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_camera() -> CameraSpec<f64> {
        CameraSpec::from_degrees(49.4, 63.0, 20.0)
    }

    #[test]
    fn footprint_of_reference_camera() {
        // 2·20·tan(24.7°), 2·20·tan(31.5°)
        let fp = camera_footprint(&reference_camera()).unwrap();
        assert_relative_eq!(fp.height, 18.397_944_416_467_78, epsilon = 1e-9);
        assert_relative_eq!(fp.width, 24.512_031_525_597_28, epsilon = 1e-9);
    }

    #[test]
    fn half_angle_tangent_one_half() {
        let a = 2.0 * 0.5f64.atan();
        let fp = camera_footprint(&CameraSpec { alpha: a, beta: a, working_distance: 20.0 }).unwrap();
        assert_relative_eq!(fp.height, 20.0, epsilon = 1e-12);
        assert_relative_eq!(fp.width, 20.0, epsilon = 1e-12);
    }

    #[test]
    fn tiny_distance_stays_positive() {
        let fp = camera_footprint(&CameraSpec { alpha: 1.0, beta: 1.0, working_distance: 1e-9 }).unwrap();
        assert!(fp.height > 0.0 && fp.width > 0.0);
        assert_relative_eq!(fp.height, 2e-9 * 0.5f64.tan(), max_relative = 1e-12);
    }

    #[test]
    fn straight_angle_is_invalid() {
        let cam = CameraSpec { alpha: std::f64::consts::PI, beta: 1.0, working_distance: 20.0 };
        assert!(matches!(camera_footprint(&cam), Err(PlanError::InvalidCamera(_))));
        let cam = CameraSpec { alpha: 1.0, beta: 1.0, working_distance: 0.0 };
        assert!(camera_footprint(&cam).is_err());
    }

    #[test]
    fn horizontal_neighbor_has_no_vertical_offset() {
        let fp = Footprint { height: 18.394, width: 24.514 };
        let d = pair_offset(&fp, 1.028, 2.788, std::f64::consts::FRAC_PI_2).unwrap();
        assert_eq!(d.x, 0.0);
        assert_relative_eq!(d.y, 23.486, epsilon = 1e-9);
        assert_eq!(d.z, 0.0);
    }

    #[test]
    fn diagonal_neighbor() {
        let fp = Footprint { height: 2.0, width: 2.0 };
        let d = pair_offset(&fp, 1.0, 1.0, std::f64::consts::FRAC_PI_4).unwrap();
        assert_eq!(d, Vec3::new(0.0, 1.0, 1.0));
    }

    #[test]
    fn full_overlap_coincides() {
        let fp = Footprint { height: 2.0, width: 3.0 };
        let d = pair_offset(&fp, 3.0, 2.0, 0.3).unwrap();
        assert_eq!(d, Vec3::zero());
    }

    #[test]
    fn overlap_bounds() {
        let fp = Footprint { height: 2.0, width: 3.0 };
        assert!(matches!(pair_offset(&fp, 0.0, 1.0, 0.0), Err(PlanError::OverlapOutOfRange(_))));
        assert!(pair_offset(&fp, 3.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn reference_formation_footprint() {
        let cam = reference_camera();
        let fp = camera_footprint(&cam).unwrap();
        let ow = 2.0 * fp.width - 48.0;
        let oh = 2.0 * fp.height - 34.0;
        let fs = build_formation(&cam, 2, 2, ow, oh).unwrap();
        assert_relative_eq!(fs.footprint_w, 48.0, epsilon = 1e-9);
        assert_relative_eq!(fs.footprint_h, 34.0, epsilon = 1e-9);
        assert_eq!(fs.offsets.len(), 4);
        let (uw, uh) = fs.union_extent();
        assert_relative_eq!(uw, 48.0, epsilon = 1e-9);
        assert_relative_eq!(uh, 34.0, epsilon = 1e-9);
    }

    #[test]
    fn single_uav_identity() {
        let cam = reference_camera();
        let fs = build_formation(&cam, 1, 1, 1.0, 1.0).unwrap();
        let fp = camera_footprint(&cam).unwrap();
        assert_eq!(fs.offsets, vec![Vec3::zero()]);
        assert_eq!((fs.footprint_w, fs.footprint_h), (fp.width, fp.height));
    }

    #[test]
    fn three_in_a_row() {
        let cam = CameraSpec { alpha: 1.0, beta: std::f64::consts::FRAC_PI_2, working_distance: 5.0 };
        let fs = build_formation(&cam, 1, 3, 2.0, 0.0).unwrap();
        assert_relative_eq!(fs.footprint_w, 26.0, epsilon = 1e-9);
    }

    #[test]
    fn spacing_subtracts_stitch_overlap() {
        let cam = reference_camera();
        let fp = camera_footprint(&cam).unwrap();
        let fs = build_formation(&cam, 2, 2, 2.0 * fp.width - 48.0, 2.0 * fp.height - 34.0).unwrap();
        let s = viewpoint_spacing(&fs, 8.0, 0.0).unwrap();
        assert_relative_eq!(s.delta_w, 40.0, epsilon = 1e-9);
        assert_relative_eq!(s.delta_h, 34.0, epsilon = 1e-9);
        let s = viewpoint_spacing(&fs, 0.0, 0.0).unwrap();
        assert_eq!((s.delta_w, s.delta_h), (fs.footprint_w, fs.footprint_h));
        assert!(matches!(viewpoint_spacing(&fs, fs.footprint_w, 0.0), Err(PlanError::OverlapOutOfRange(_))));
    }

    #[test]
    fn f32_footprint() {
        let cam = CameraSpec::<f32>::from_degrees(49.4, 63.0, 20.0);
        let fp = camera_footprint(&cam).unwrap();
        assert!((fp.width - 24.512).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn offsets_reproduce_union_footprint(
            rows in 1usize..5, cols in 1usize..5,
            fw in 0.01f64..0.99, fh in 0.01f64..0.99,
            d in 1.0f64..100.0,
        ) {
            let cam = CameraSpec { alpha: 1.0, beta: 1.2, working_distance: d };
            let fp = camera_footprint(&cam).unwrap();
            let fs = build_formation(&cam, rows, cols, fw * fp.width, fh * fp.height).unwrap();
            let (uw, uh) = fs.union_extent();
            prop_assert!((uw - fs.footprint_w).abs() <= 1e-9 * fs.footprint_w);
            prop_assert!((uh - fs.footprint_h).abs() <= 1e-9 * fs.footprint_h);
            prop_assert!(fs.offsets.iter().all(|o| o.x == 0.0));
            // leader sits on the union centroid
            let (sy, sz) = fs.offsets.iter().fold((0.0, 0.0), |a, o| (a.0 + o.y, a.1 + o.z));
            prop_assert!(sy.abs() < 1e-9 * d * 10.0 && sz.abs() < 1e-9 * d * 10.0);
        }

        #[test]
        fn chain_order_does_not_matter(rows in 1usize..5, cols in 1usize..5, fw in 0.01f64..0.99, fh in 0.01f64..0.99) {
            let fp = Footprint { height: 18.0, width: 24.0 };
            let a = chain_offsets(&fp, rows, cols, fw * 24.0, fh * 18.0, false).unwrap();
            let b = chain_offsets(&fp, rows, cols, fw * 24.0, fh * 18.0, true).unwrap();
            for (p, q) in a.iter().zip(&b) {
                prop_assert!(p.distance(*q) < 1e-9);
            }
        }

        #[test]
        fn opposite_direction_negates(gamma in -3.0f64..3.0, ow in 0.1f64..3.0, oh in 0.1f64..2.0) {
            let fp = Footprint { height: 2.0, width: 3.0 };
            let ij = pair_offset(&fp, ow, oh, gamma).unwrap();
            let ji = pair_offset(&fp, ow, oh, gamma + std::f64::consts::PI).unwrap();
            prop_assert_eq!(ij, -ji);
        }

        #[test]
        fn footprint_grows_with_distance(d in 0.1f64..100.0, extra in 0.01f64..10.0) {
            let near = camera_footprint(&CameraSpec { alpha: 0.8, beta: 1.1, working_distance: d }).unwrap();
            let far = camera_footprint(&CameraSpec { alpha: 0.8, beta: 1.1, working_distance: d + extra }).unwrap();
            prop_assert!(far.height > near.height && far.width > near.width);
        }
    }
}
