/// Euclidean projection onto the probability simplex (sort-and-threshold).
pub fn project_simplex(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let sum: f64 = x.iter().sum();
    if x.iter().all(|&v| v >= 0.0) && (sum - 1.0).abs() <= 4.0 * f64::EPSILON * n as f64 {
        return x.to_vec();
    }

    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    x.iter().map(|&v| (v - theta).max(0.0)).collect()
}
