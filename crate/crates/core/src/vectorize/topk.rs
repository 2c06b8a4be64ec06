use crate::persistence::PersistenceDiagram;

/// `(b, d)` of the `k` most persistent pairs (ties by birth, then death),
/// zero-padded to length `2k`.
pub fn topk_vectorize(diagram: &PersistenceDiagram, k: usize) -> Vec<f64> {
    assert!(k >= 1, "top-k vectorization needs k ≥ 1");
    let mut pairs = diagram.pairs.clone();
    pairs.sort_by(|a, b| {
        b.persistence()
            .total_cmp(&a.persistence())
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    let mut out = vec![0.0; 2 * k];
    for (i, p) in pairs.iter().take(k).enumerate() {
        out[2 * i] = p.birth;
        out[2 * i + 1] = p.death;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_and_order() {
        assert_eq!(
            topk_vectorize(&PersistenceDiagram::new(1, vec![]), 2),
            vec![0.0; 4]
        );
        let d = PersistenceDiagram::from_tuples(1, &[(0.0, 0.2), (0.0, 1.0)]);
        assert_eq!(topk_vectorize(&d, 1), vec![0.0, 1.0]);
        assert_eq!(topk_vectorize(&d, 3), vec![0.0, 1.0, 0.0, 0.2, 0.0, 0.0]);
    }
}
