//! Compensated accumulation. Series here can run to 10^6 terms of mixed
//! magnitude, so plain `f64` summation loses digits the identity tests need.

/// Neumaier variant of Kahan summation: the compensation also catches the
/// case where the running sum is smaller than the incoming term.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sum in ascending order of value. Makes the result independent of input
/// permutation, which the normalization contract requires bit-for-bit.
pub fn canonical_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in canonical_sum"));
    neumaier_sum(sorted)
}
