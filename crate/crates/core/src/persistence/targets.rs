use super::{PersistenceDiagram, PersistencePair};
use crate::error::{invalid, Result};

/// Keeps the ⌈keep·M⌉ most persistent finite pairs, ties broken by
/// (birth, death). Essential bars are dropped.
pub fn quantile_threshold(diagram: &PersistenceDiagram, keep: f64) -> Result<PersistenceDiagram> {
    if !(keep > 0.0 && keep <= 1.0) {
        return Err(invalid(format!(
            "keep fraction must lie in (0, 1], got {keep}"
        )));
    }
    let m = diagram.pairs.len();
    let count = ((keep * m as f64).ceil() as usize).min(m);
    let mut pairs = diagram.pairs.clone();
    pairs.sort_by(|a, b| {
        b.persistence()
            .total_cmp(&a.persistence())
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    pairs.truncate(count);
    Ok(PersistenceDiagram {
        dimension: diagram.dimension,
        pairs,
        essential: Vec::new(),
        provenance: diagram.provenance.clone(),
    })
}

/// Divides every diagram by the largest finite coordinate in the collection.
pub fn scale_dataset(diagrams: &[PersistenceDiagram]) -> Result<(Vec<PersistenceDiagram>, f64)> {
    let s = diagrams
        .iter()
        .flat_map(|d| d.pairs.iter())
        .map(|p| p.birth.max(p.death))
        .fold(f64::NEG_INFINITY, f64::max);
    if !(s.is_finite() && s > 0.0) {
        return Err(invalid(
            "cannot scale a collection without finite positive pairs",
        ));
    }
    let rescale = |p: &PersistencePair| PersistencePair::new(p.birth / s, p.death / s);
    let scaled = diagrams
        .iter()
        .map(|d| {
            let mut out = d.clone();
            out.pairs = d.pairs.iter().map(rescale).collect();
            out.essential = d.essential.iter().map(rescale).collect();
            out.provenance.scale *= s;
            out
        })
        .collect();
    Ok((scaled, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn keeps_the_single_most_persistent() {
        let pairs: Vec<(f64, f64)> = (0..10).map(|i| (0.0, 0.1 * (i + 1) as f64)).collect();
        let d = PersistenceDiagram::from_tuples(1, &pairs);
        let t = quantile_threshold(&d, 0.10).unwrap();
        assert_eq!(t.pairs, vec![PersistencePair::new(0.0, 1.0)]);
        assert_eq!(
            quantile_threshold(&d, 1.0).unwrap().sorted_pairs(),
            d.sorted_pairs()
        );
    }

    #[test]
    fn ceil_count_and_ties() {
        let pairs: Vec<(f64, f64)> = (0..23)
            .map(|i| (0.01 * i as f64, 0.01 * i as f64 + 0.5))
            .collect();
        let d = PersistenceDiagram::from_tuples(1, &pairs);
        let t = quantile_threshold(&d, 0.10).unwrap();
        // All persistences are (nearly) tied; check against the explicit sort.
        let mut oracle = d.pairs.clone();
        oracle.sort_by(|a, b| {
            (b.death - b.birth)
                .partial_cmp(&(a.death - a.birth))
                .unwrap()
                .then(a.birth.partial_cmp(&b.birth).unwrap())
        });
        assert_eq!(t.pairs.len(), 3);
        assert_eq!(t.pairs, oracle[..3].to_vec());
    }

    #[test]
    fn empty_and_invalid() {
        let d = PersistenceDiagram::new(1, vec![]);
        assert!(quantile_threshold(&d, 0.1).unwrap().is_empty());
        assert!(quantile_threshold(&d, 0.0).is_err());
        assert!(quantile_threshold(&d, 1.5).is_err());
        assert!(scale_dataset(&[d.clone(), d]).is_err());
        assert!(scale_dataset(&[]).is_err());
    }

    #[test]
    fn scaling() {
        let (out, s) = scale_dataset(&[PersistenceDiagram::from_tuples(1, &[(0.0, 2.0)])]).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(out[0].pairs[0], PersistencePair::new(0.0, 1.0));
        assert_eq!(out[0].provenance.scale, 2.0);
        let (again, s2) = scale_dataset(&out).unwrap();
        assert_eq!(s2, 1.0);
        assert_eq!(again[0].pairs, out[0].pairs);
    }

    #[test]
    fn mixed_maximum_attained_once() {
        let a = PersistenceDiagram::from_tuples(1, &[(0.1, 0.2), (0.05, 0.37)]);
        let b = PersistenceDiagram::from_tuples(1, &[(0.3, 0.31)]);
        let (out, s) = scale_dataset(&[a, b]).unwrap();
        assert_eq!(s, 0.37);
        let coords: Vec<f64> = out
            .iter()
            .flat_map(|d| d.pairs.iter())
            .flat_map(|p| [p.birth, p.death])
            .collect();
        assert!(coords.iter().all(|&c| c <= 1.0));
        assert_eq!(coords.iter().filter(|&&c| c == 1.0).count(), 1);
    }

    proptest! {
        #[test]
        fn threshold_is_subset_with_ceil_size(
            raw in prop::collection::vec((0.0f64..1.0, 0.001f64..1.0), 0..60),
            keep in 0.01f64..=1.0,
        ) {
            let pairs: Vec<(f64, f64)> = raw.iter().map(|&(b, p)| (b, b + p)).collect();
            let d = PersistenceDiagram::from_tuples(1, &pairs);
            let t = quantile_threshold(&d, keep).unwrap();
            prop_assert_eq!(t.len(), ((keep * pairs.len() as f64).ceil() as usize).min(pairs.len()));
            let min_kept = t.pairs.iter().map(|p| p.persistence()).fold(f64::INFINITY, f64::min);
            let dropped = d.pairs.iter().filter(|p| !t.pairs.contains(p));
            for p in dropped {
                prop_assert!(p.persistence() <= min_kept);
            }
        }
    }
}
