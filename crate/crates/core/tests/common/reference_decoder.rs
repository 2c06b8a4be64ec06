//! Scalar-loop decoder forward pass over plain `Vec<Vec<f64>>` matrices,
//! written independently of the library's matrix code.

use topofiltr::decoder::{NormPlacement, WeightManifest};

pub type Mat = Vec<Vec<f64>>;

fn tensor(m: &WeightManifest, name: &str) -> Vec<f64> {
    m.tensors[name].data.iter().map(|&v| v as f64).collect()
}

fn linear(m: &WeightManifest, name: &str, x: &Mat) -> Mat {
    let w = tensor(m, &format!("{name}.weight"));
    let b = tensor(m, &format!("{name}.bias"));
    let shape = &m.tensors[&format!("{name}.weight")].shape;
    let (fan_in, fan_out) = (shape[0], shape[1]);
    x.iter()
        .map(|row| {
            (0..fan_out)
                .map(|o| {
                    let mut s = b[o];
                    for i in 0..fan_in {
                        s += row[i] * w[i * fan_out + o];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn layer_norm(m: &WeightManifest, name: &str, x: &Mat) -> Mat {
    let g = tensor(m, &format!("{name}.weight"));
    let b = tensor(m, &format!("{name}.bias"));
    x.iter()
        .map(|row| {
            let n = row.len() as f64;
            let mean = row.iter().sum::<f64>() / n;
            let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            row.iter()
                .enumerate()
                .map(|(j, v)| (v - mean) / (var + 1e-5).sqrt() * g[j] + b[j])
                .collect()
        })
        .collect()
}

fn relu(x: Mat) -> Mat {
    x.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| if v > 0.0 { v } else { 0.0 })
                .collect()
        })
        .collect()
}

fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

fn attention(
    m: &WeightManifest,
    name: &str,
    heads: usize,
    q_in: &Mat,
    k_in: &Mat,
    v_in: &Mat,
) -> Mat {
    let q = linear(m, &format!("{name}.q"), q_in);
    let k = linear(m, &format!("{name}.k"), k_in);
    let v = linear(m, &format!("{name}.v"), v_in);
    let d = q[0].len();
    let dh = d / heads;
    let mut concat = vec![vec![0.0; d]; q.len()];
    for h in 0..heads {
        for (qi, qrow) in q.iter().enumerate() {
            let scores: Vec<f64> = k
                .iter()
                .map(|krow| {
                    (0..dh)
                        .map(|c| qrow[h * dh + c] * krow[h * dh + c])
                        .sum::<f64>()
                        / (dh as f64).sqrt()
                })
                .collect();
            let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let e: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
            let z: f64 = e.iter().sum();
            for c in 0..dh {
                concat[qi][h * dh + c] = (0..k.len()).map(|t| e[t] / z * v[t][h * dh + c]).sum();
            }
        }
    }
    linear(m, &format!("{name}.out"), &concat)
}

pub fn adapt(m: &WeightManifest, features: &Mat, centers: &Mat) -> (Mat, Mat) {
    let tokens = linear(m, "adapter.proj", &layer_norm(m, "adapter.norm", features));
    let pos = linear(m, "pos.1", &relu(linear(m, "pos.0", centers)));
    (tokens, pos)
}

pub fn decode(m: &WeightManifest, tokens: &Mat, pos: &Mat) -> Mat {
    let c = &m.config;
    let shape = &m.tensors["query_embed"].shape;
    let q = tensor(m, "query_embed");
    let mut x: Mat = (0..shape[0])
        .map(|i| q[i * shape[1]..(i + 1) * shape[1]].to_vec())
        .collect();
    let keys = add(tokens, pos);
    let pre = c.norm == NormPlacement::Pre;
    for k in 0..c.blocks {
        let norm = |n: usize, x: &Mat| layer_norm(m, &format!("blocks.{k}.norm{n}"), x);
        let input = if pre { norm(1, &x) } else { x.clone() };
        x = add(
            &x,
            &attention(
                m,
                &format!("blocks.{k}.self_attn"),
                c.heads,
                &input,
                &input,
                &input,
            ),
        );
        if !pre {
            x = norm(1, &x);
        }
        let input = if pre { norm(2, &x) } else { x.clone() };
        x = add(
            &x,
            &attention(
                m,
                &format!("blocks.{k}.cross_attn"),
                c.heads,
                &input,
                &keys,
                tokens,
            ),
        );
        if !pre {
            x = norm(2, &x);
        }
        let input = if pre { norm(3, &x) } else { x.clone() };
        let ff = linear(
            m,
            &format!("blocks.{k}.ffn.1"),
            &relu(linear(m, &format!("blocks.{k}.ffn.0"), &input)),
        );
        x = add(&x, &ff);
        if !pre {
            x = norm(3, &x);
        }
    }
    layer_norm(m, "final_norm", &x)
}

/// (birth, death, existence logit) per query.
pub fn heads(m: &WeightManifest, states: &Mat) -> Vec<(f64, f64, f64)> {
    let layers = m.config.head_layers;
    let mut h = states.clone();
    for l in 0..layers {
        h = linear(m, &format!("pair_head.{l}"), &h);
        if l + 1 < layers {
            h = relu(h);
        }
    }
    let e = linear(m, "exist_head", states);
    h.iter()
        .zip(&e)
        .map(|(p, l)| {
            let b = 1.0 / (1.0 + (-p[0]).exp());
            let sp = if p[1] > 30.0 {
                p[1]
            } else {
                (1.0 + p[1].exp()).ln()
            };
            (b, b + sp, l[0])
        })
        .collect()
}
