use crate::problems::Sense;

/// Reference point and per-objective senses for 2-D hypervolume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypervolumeConfig {
    pub reference: [f64; 2],
    pub senses: [Sense; 2],
}

impl HypervolumeConfig {
    pub fn new(reference: [f64; 2], senses: [Sense; 2]) -> Self {
        Self { reference, senses }
    }

    pub fn maximize(reference: [f64; 2]) -> Self {
        Self::new(reference, [Sense::Maximize; 2])
    }

    pub fn minimize(reference: [f64; 2]) -> Self {
        Self::new(reference, [Sense::Minimize; 2])
    }

    /// Distance from the reference in each objective, oriented so that larger
    /// is better; `None` when the point is not strictly inside the box in
    /// both objectives.
    fn gains(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let g0 = (p[0] - self.reference[0]) * self.senses[0].orient();
        let g1 = (p[1] - self.reference[1]) * self.senses[1].orient();
        (g0 > 0.0 && g1 > 0.0).then_some([g0, g1])
    }
}

/// Volume of the box between a single point and the reference; zero when
/// the point is worse than the reference in some objective.
pub fn individual_hypervolume(point: [f64; 2], config: &HypervolumeConfig) -> f64 {
    config.gains(point).map_or(0.0, |[a, b]| a * b)
}

/// Area dominated by `points` and bounded by the reference point.
///
/// Points are mapped to gains over the reference, sorted by the first gain
/// descending and swept while tracking the best second gain.
pub fn hypervolume_2d(points: &[[f64; 2]], config: &HypervolumeConfig) -> f64 {
    let mut gains: Vec<[f64; 2]> = points.iter().filter_map(|&p| config.gains(p)).collect();
    gains.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut area = 0.0;
    let mut height = 0.0;
    for [x, y] in gains {
        if y > height {
            area += x * (y - height);
            height = y;
        }
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{cocz_true_front, CoczInstance};
    use proptest::prelude::*;

    /// Counts unit cells `[i, i+1] x [j, j+1]` covered by some point's box.
    fn lattice_oracle(points: &[(u32, u32)]) -> u64 {
        let mut cells = 0;
        for i in 0..31u32 {
            for j in 0..31u32 {
                if points.iter().any(|&(a, b)| i < a && j < b) {
                    cells += 1;
                }
            }
        }
        cells
    }

    #[test]
    fn cocz_front() {
        let front = cocz_true_front(&CoczInstance::new(30, 15).unwrap());
        let hv = hypervolume_2d(&front, &HypervolumeConfig::maximize([0.0, 0.0]));
        assert_eq!(hv, 780.0);
        let two = hypervolume_2d(
            &[[15.0, 30.0], [30.0, 15.0]],
            &HypervolumeConfig::maximize([0.0, 0.0]),
        );
        assert_eq!(two, 675.0);
        assert_eq!(lattice_oracle(&[(15, 30), (30, 15)]), 675);
    }

    #[test]
    fn single_points() {
        let max = HypervolumeConfig::maximize([0.0, 0.0]);
        assert_eq!(hypervolume_2d(&[[4.0, 5.0]], &max), 20.0);
        assert_eq!(individual_hypervolume([15.0, 30.0], &max), 450.0);
        assert_eq!(individual_hypervolume([0.0, 0.0], &max), 0.0);
        let min = HypervolumeConfig::minimize([10.0, 10.0]);
        assert_eq!(individual_hypervolume([4.0, 7.0], &min), 18.0);
        assert_eq!(hypervolume_2d(&[[4.0, 7.0], [12.0, 1.0]], &min), 18.0);
        assert_eq!(hypervolume_2d(&[], &max), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_lattice_count(pts in proptest::collection::vec((0u32..=30, 0u32..=30), 0..12)) {
            let points: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a as f64, b as f64]).collect();
            let hv = hypervolume_2d(&points, &HypervolumeConfig::maximize([0.0, 0.0]));
            prop_assert_eq!(hv, lattice_oracle(&pts) as f64);
        }

        #[test]
        fn monotone(pts in proptest::collection::vec((0.0f64..30.0, 0.0f64..30.0), 1..15), extra in (0.0f64..30.0, 0.0f64..30.0)) {
            let cfg = HypervolumeConfig::maximize([0.0, 0.0]);
            let mut points: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a, b]).collect();
            let before = hypervolume_2d(&points, &cfg);
            points.push([extra.0, extra.1]);
            prop_assert!(hypervolume_2d(&points, &cfg) >= before);
            // a point dominated by an existing one changes nothing
            let mut points: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a, b]).collect();
            let [a, b] = points[0];
            points.push([a * 0.5, b * 0.9]);
            prop_assert_eq!(hypervolume_2d(&points, &cfg), before);
        }
    }
}
