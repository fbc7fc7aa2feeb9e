//! Tabulated closed forms for the p^k-Eulerian polynomials on floors
//! `2k+2 ..= 2k+8`, transcribed as printed.
//!
//! Each entry stands for `((p-1)/2) (q+1) Σ c_i q^i / den`; the first entry
//! whose condition holds wins.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::hook::{self, geometric_sum, pow};
use crate::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TabulatedForm {
    /// Which printed case applied, as its condition on `l`.
    pub case: String,
    pub poly: IntPolynomial,
}

type Cond = Box<dyn Fn(i128, i128) -> bool>;
type Bracket = Box<dyn Fn(i128) -> Vec<i128>>;

struct Entry {
    label: &'static str,
    ts: (i128, i128),
    den: i128,
    cond: Cond,
    bracket: Bracket,
}

fn entry(
    label: &'static str,
    ts: (i128, i128),
    den: i128,
    cond: impl Fn(i128, i128) -> bool + 'static,
    bracket: impl Fn(i128) -> Vec<i128> + 'static,
) -> Entry {
    Entry {
        label,
        ts,
        den,
        cond: Box::new(cond),
        bracket: Box::new(bracket),
    }
}

const NO_T: (i128, i128) = (0, 0);

/// Printed closed form of the polynomial at offset `l` of class `k` on `floor`.
///
/// Class 0 is covered on floors 2 to 4 only; other classes on `2k+2 ..= 2k+8`,
/// with floor `2k+8` needing `k >= 1`.
pub fn initial_closed_form(p: u64, k: u32, floor: u32, l: u64) -> Result<TabulatedForm> {
    hook::check_odd_prime(p)?;
    if floor < 2 * k + 2 {
        return Err(out_of_range("floor", floor, format!("[{}, {}]", 2 * k + 2, 2 * k + 8)));
    }
    let rel = floor - 2 * k;
    let pk = pow(p, k)?;
    let bound = if rel % 2 == 0 { pk } else { pk * p };
    if l >= bound {
        return Err(out_of_range("l", l, format!("[0, {bound})")));
    }
    if k == 0 && rel > 4 {
        return Err(Error::Unsupported(format!(
            "class 0 tables stop at floor 4, got {floor}"
        )));
    }
    if rel > 8 {
        return Err(Error::Unsupported(format!("no printed table for floor 2k+{rel}")));
    }
    let entries = table(p as i128, k, rel)?;
    let li = l as i128;
    for e in &entries {
        for t in e.ts.0..=e.ts.1 {
            if (e.cond)(li, t) {
                let poly = assemble(p as i128, e.den, &(e.bracket)(t))?;
                return Ok(TabulatedForm {
                    case: e.label.to_string(),
                    poly,
                });
            }
        }
    }
    Err(Error::Uncovered {
        l,
        context: format!("p = {p}, k = {k}, floor {floor}"),
    })
}

fn assemble(p: i128, den: i128, bracket: &[i128]) -> Result<IntPolynomial> {
    let mut out = vec![0i128; bracket.len() + 1];
    for (i, &c) in bracket.iter().enumerate() {
        out[i] += c;
        out[i + 1] += c;
    }
    out.into_iter()
        .enumerate()
        .map(|(i, c)| {
            let num = c * (p - 1);
            if num % (2 * den) != 0 {
                Err(Error::NonIntegral(i))
            } else {
                Ok(BigInt::from(num / (2 * den)))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(IntPolynomial::from_coeffs)
}

fn table(p: i128, k: u32, rel: u32) -> Result<Vec<Entry>> {
    let h = (p - 1) / 2;
    let pu = p as u64;
    let repunit = |e: u32| -> Result<i128> { Ok(((pow(pu, e)? - 1) / (pu - 1)) as i128) };
    let g = |a: u32, b: i64| -> Result<i128> { Ok(geometric_sum(pu, a, b)? as i128) };
    let pk = pow(pu, k)? as i128;
    Ok(match (rel, k) {
        (2, _) | (3, _) => vec![entry("all l", NO_T, 1, |_, _| true, |_| vec![1])],
        (4, 0) => vec![entry("k = 0", NO_T, 1, |_, _| true, move |_| vec![h + 1, h])],
        (4, _) => vec![
            entry(
                "l < p^k(p-1)/2",
                NO_T,
                1,
                move |l, _| 2 * l < pk * (p - 1),
                move |_| vec![h, h + 1],
            ),
            entry("p^k(p-1)/2 <= l", NO_T, 1, |_, _| true, move |_| vec![h + 1, h]),
        ],
        (5, _) => {
            let r = repunit(k + 1)?;
            let j = move |t: i128| t * r;
            vec![
                entry("L = 0", NO_T, 1, |l, _| l == 0, move |_| vec![h, h + 1]),
                entry(
                    "j_{t-1} < L <= j_t, 1 <= t <= (p-3)/2",
                    (1, (p - 3) / 2),
                    2,
                    move |l, t| j(t - 1) < l && l <= j(t),
                    move |t| vec![p - 2 * t - 1, p + 2 * t + 1],
                ),
                entry(
                    "j_{(p-3)/2} < L < j_h - h",
                    NO_T,
                    1,
                    move |l, _| j((p - 3) / 2) < l && l < j(h) - h,
                    move |_| vec![0, p],
                ),
                entry(
                    "j_h - h <= L <= j_h",
                    NO_T,
                    1,
                    move |l, _| j(h) - h <= l && l <= j(h),
                    move |_| vec![1, p - 1],
                ),
                entry(
                    "j_h < L <= j_{(p+1)/2}",
                    NO_T,
                    1,
                    move |l, _| j(h) < l && l <= j((p + 1) / 2),
                    move |_| vec![0, p],
                ),
                entry(
                    "j_{t-1} < L <= j_t, (p-1)/2 <= t <= p-1",
                    (h, p - 1),
                    2,
                    move |l, t| j(t - 1) < l && l <= j(t),
                    move |t| vec![3 * p - 2 * t + 1, 0, -(p - 2 * t + 1)],
                ),
            ]
        }
        (6, 1) => vec![
            entry(
                "l = t, t <= (p-3)/2",
                (0, (p - 3) / 2),
                2,
                |l, t| l == t,
                move |t| vec![0, p * p - 2 * t + 1, p * p + 2 * t - 1],
            ),
            entry(
                "l = (p-1)/2",
                NO_T,
                2,
                move |l, _| l == h,
                move |_| vec![2, p * p + p - 2, p * p - p],
            ),
            entry(
                "l = t, t >= (p+1)/2",
                ((p + 1) / 2, p - 1),
                2,
                |l, t| l == t,
                move |t| vec![0, p * p - 2 * t + 1 + 2 * p, p * p + 2 * t - 1 - 2 * p],
            ),
        ],
        (6, _) => {
            let r = repunit(k)?;
            let j = move |t: i128| t * r;
            vec![
                entry("l = 0", NO_T, 2, |l, _| l == 0, move |_| vec![0, p * p - 1, p * p + 1]),
                entry(
                    "j_{t-1} < l <= j_t, 1 <= t <= (p-3)/2",
                    (1, (p - 3) / 2),
                    2,
                    move |l, t| j(t - 1) < l && l <= j(t),
                    move |t| vec![0, p * p - 2 * t - 1, p * p + 2 * t + 1],
                ),
                entry(
                    "j_{(p-3)/2} < l < j_h - h",
                    NO_T,
                    2,
                    move |l, _| j((p - 3) / 2) < l && l < j(h) - h,
                    move |_| vec![0, p * (p - 1), p * (p + 1)],
                ),
                entry(
                    "j_h - h <= l < j_h",
                    NO_T,
                    2,
                    move |l, _| j(h) - h <= l && l < j(h),
                    move |_| vec![0, p * p - p + 2, p * p + p - 2],
                ),
                entry(
                    "l = j_h",
                    NO_T,
                    2,
                    move |l, _| l == j(h),
                    move |_| vec![2, p * p + p - 2, p * p - p],
                ),
                entry(
                    "j_{t-1} < l <= j_t, (p-1)/2 <= t <= p-1",
                    (h, p - 1),
                    2,
                    move |l, t| j(t - 1) < l && l <= j(t),
                    move |t| vec![0, p * p - 2 * t + 2 * p + 1, p * p + 2 * t - 2 * p - 1],
                ),
            ]
        }
        (7, _) => {
            let r = repunit(k + 1)?;
            let j = move |t: i128| t * r;
            let upper_open = move |t: i128| {
                vec![
                    0,
                    -(t - 2) * (t - p),
                    -2 * t * t + (4 * p + 6) * t - 3 * (p + 1) * (p + 1),
                    -(p * p + t * t - (3 * p + 4) * t + 4 * p + 3),
                ]
            };
            let upper_closed = move |t: i128| {
                vec![
                    0,
                    -(t - 2) * (t - p),
                    -2 * t * t + (4 * p + 6) * t - 3 * p * p - 6 * p - 1,
                    -(p * p + t * t - (3 * p + 4) * t + 4 * p + 1),
                ]
            };
            let mut v = Vec::new();
            if k == 1 {
                v.push(entry(
                    "L = 0",
                    NO_T,
                    2,
                    |l, _| l == 0,
                    move |_| vec![0, p * p + 1, p * p - 1],
                ));
                v.push(entry(
                    "j_{t-1} < L < j_t - t, 1 <= t <= (p-1)/2",
                    (1, h),
                    2,
                    move |l, t| j(t - 1) < l && l < j(t) - t,
                    move |t| {
                        vec![
                            0,
                            p * p - (p + 4) * t - t * t + 3,
                            p * p + 2 * t * t + 3 * t - 3,
                            (p - 2) * t - t * t,
                        ]
                    },
                ));
                v.push(entry(
                    "j_t - t <= L <= j_t, 1 <= t <= (p-3)/2",
                    (1, (p - 3) / 2),
                    2,
                    move |l, t| j(t) - t <= l && l <= j(t),
                    move |t| {
                        vec![
                            0,
                            p * p - (p + 4) * t - t * t + 1,
                            p * p + 2 * t * t + 3 * t - 1,
                            (p - 2) * t - t * t,
                        ]
                    },
                ));
            } else {
                v.push(entry(
                    "L = 0",
                    NO_T,
                    2,
                    |l, _| l == 0,
                    move |_| vec![0, p * p - 1, p * p + 1],
                ));
                v.push(entry(
                    "j_{t-1} < L < j_t - t, 1 <= t <= (p-1)/2",
                    (1, h),
                    2,
                    move |l, t| j(t - 1) < l && l < j(t) - t,
                    move |t| {
                        vec![
                            0,
                            p * p + 1 - (p + 4) * t - t * t,
                            p * p + 2 * t * t + 6 * t - 1,
                            (p - 2) * t - t * t,
                        ]
                    },
                ));
                v.push(entry(
                    "j_t - t <= L <= j_t, 1 <= t <= (p-3)/2",
                    (1, (p - 3) / 2),
                    2,
                    move |l, t| j(t) - t <= l && l <= j(t),
                    move |t| {
                        vec![
                            0,
                            p * p - 1 - (p + 4) * t - t * t,
                            (p - 1) * (p - 1) + 2 * t * t + 6 * t,
                            (p - 2) * t - t * t,
                        ]
                    },
                ));
                v.push(entry(
                    "j_h - p(p-1)/2 <= L < j_h - h",
                    NO_T,
                    8,
                    move |l, _| j(h) - p * (p - 1) / 2 <= l && l < j(h) - h,
                    move |_| vec![0, p * p - 4 * p + 11, 6 * p * p - 8 * p + 14, p * p - 4 * p + 3],
                ));
            }
            v.push(entry(
                "j_h - h <= L <= j_h",
                NO_T,
                8,
                move |l, _| j(h) - h <= l && l <= j(h),
                move |_| vec![8, p * p + 4 * p - 5, 6 * p * p - 6, p * p - 4 * p + 3],
            ));
            let first_upper = if k == 1 { p * p + 4 * p - 11 } else { p * p - 4 * p + 11 };
            v.push(entry(
                "j_h < L < j_{(p+1)/2} - (p+1)/2",
                NO_T,
                8,
                move |l, _| j(h) < l && l < j((p + 1) / 2) - (p + 1) / 2,
                move |_| vec![0, first_upper, 6 * p * p + 8 * p - 14, p * p - 4 * p + 3],
            ));
            v.push(entry(
                "j_{t-1} < L < j_t - t, (p+3)/2 <= t <= p-1",
                ((p + 3) / 2, p - 1),
                2,
                move |l, t| j(t - 1) < l && l < j(t) - t,
                upper_open,
            ));
            v.push(entry(
                "j_t - t <= L <= j_t, (p+1)/2 <= t <= p-1",
                ((p + 1) / 2, p - 1),
                2,
                move |l, t| j(t) - t <= l && l <= j(t),
                upper_closed,
            ));
            v
        }
        (8, 0) => return Err(Error::Unsupported("floor 2k+8 needs k >= 1".into())),
        (8, _) => {
            let p3 = p * p * p;
            let p2 = p * p;
            let base = p3 - 3 * p2 - p + 3;
            if k == 1 {
                vec![
                    entry(
                        "l = t, t <= (p-3)/2",
                        (0, (p - 3) / 2),
                        24,
                        |l, t| l == t,
                        move |t| {
                            vec![
                                0,
                                p3 - 3 * p2 - p + 27,
                                11 * p3 + 3 * p2 + 37 * p - 51 - 12 * t * (t + 2),
                                11 * p3 + 3 * p2 - 35 * p + 21 + 24 * t * (t + 2),
                                base + 12 * t * (p - 2) - 12 * t * t,
                            ]
                        },
                    ),
                    entry(
                        "l = (p-1)/2",
                        NO_T,
                        24,
                        move |l, _| l == h,
                        move |_| {
                            vec![
                                24,
                                p3 + 11 * p - 12,
                                11 * p3 + 9 * p2 + 25 * p - 45,
                                11 * p3 - 6 * p2 - 35 * p + 30,
                                base,
                            ]
                        },
                    ),
                    entry(
                        "l = t, t >= (p+1)/2",
                        ((p + 1) / 2, p - 1),
                        24,
                        |l, t| l == t,
                        move |t| {
                            vec![
                                0,
                                p3 - 3 * p2 - 25 * p + 27 - 12 * t * (t - 2) + 12 * t * p,
                                11 * p3 + 27 * p2 + 85 * p - 51 + 24 * t * (t - 2) - 48 * t * p,
                                11 * p3 - 21 * p2 - 59 * p + 21 - 12 * t * (t - 2) + 36 * t * p,
                                base,
                            ]
                        },
                    ),
                ]
            } else {
                // shared coefficient families; `a` and `b` are the constants on q^2 and q^3
                let low = move |t: i128, a: i128, b: i128| {
                    vec![
                        0,
                        base,
                        11 * p3 + 3 * p2 + p + a - 12 * t * (t + p + 2),
                        11 * p3 + 3 * p2 + p + b + 24 * t * (t + 3),
                        base - 12 * t * (t - p + 2),
                    ]
                };
                let high = move |t: i128, a: i128, b: i128| {
                    vec![
                        0,
                        p3 - 3 * p2 - 25 * p + 3 - 12 * t * (t - p - 2),
                        11 * p3 + 27 * p2 + 73 * p + a + 24 * t * (t - 2 * p - 3),
                        11 * p3 - 21 * p2 - 47 * p + b - 12 * t * (t - 3 * p - 4),
                        base,
                    ]
                };
                let below_mid = move |_| {
                    vec![
                        0,
                        p3 - 3 * p2 - p + 27,
                        11 * p3 - 6 * p2 + 13 * p - 18,
                        11 * p3 + 9 * p2 + p - 21,
                        p3 - 13 * p + 12,
                    ]
                };
                let mid = move |_| {
                    vec![
                        24,
                        p3 + 11 * p - 12,
                        11 * p3 + 9 * p2 + p - 21,
                        11 * p3 - 6 * p2 - 11 * p + 6,
                        base,
                    ]
                };
                let above_mid = move |_| {
                    vec![
                        0,
                        p3 - 13 * p + 36,
                        11 * p3 + 9 * p2 + 25 * p - 45,
                        11 * p3 - 6 * p2 - 11 * p + 6,
                        base,
                    ]
                };
                if k == 2 {
                    vec![
                        entry(
                            "l = 0",
                            NO_T,
                            24,
                            |l, _| l == 0,
                            move |_| vec![0, base, 11 * p3 + 3 * p2 + p + 9, 11 * p3 + 3 * p2 + p - 15, base],
                        ),
                        entry(
                            "(t-1)(p+1) < l < tp, 1 <= t <= (p-1)/2",
                            (1, h),
                            24,
                            move |l, t| (t - 1) * (p + 1) < l && l < t * p,
                            move |t| low(t, 33, -39),
                        ),
                        entry(
                            "tp <= l <= t(p+1), 1 <= t <= (p-3)/2",
                            (1, (p - 3) / 2),
                            24,
                            move |l, t| t * p <= l && l <= t * (p + 1),
                            move |t| low(t, 9, -15),
                        ),
                        entry(
                            "hp <= l < h(p+1)",
                            NO_T,
                            24,
                            move |l, _| h * p <= l && l < h * (p + 1),
                            below_mid,
                        ),
                        entry("l = h(p+1)", NO_T, 24, move |l, _| l == h * (p + 1), mid),
                        entry(
                            "h(p+1) < l < (p+1)p/2",
                            NO_T,
                            24,
                            move |l, _| h * (p + 1) < l && l < (p + 1) / 2 * p,
                            above_mid,
                        ),
                        entry(
                            "(t-1)(p+1) < l < tp, (p+3)/2 <= t <= p-1",
                            ((p + 3) / 2, p - 1),
                            24,
                            move |l, t| (t - 1) * (p + 1) < l && l < t * p,
                            move |t| high(t, 33, -39),
                        ),
                        entry(
                            "tp <= l <= t(p+1), (p+1)/2 <= t <= p-1",
                            ((p + 1) / 2, p - 1),
                            24,
                            move |l, t| t * p <= l && l <= t * (p + 1),
                            move |t| high(t, 9, -15),
                        ),
                    ]
                } else {
                    let r0 = g(0, i64::from(k) - 1)?;
                    let r1 = g(1, i64::from(k) - 1)?;
                    let r2 = g(2, i64::from(k) - 1)?;
                    vec![
                        entry(
                            "l = 0",
                            NO_T,
                            24,
                            |l, _| l == 0,
                            move |_| vec![0, base, 11 * p3 + 3 * p2 + p - 15, 11 * p3 + 3 * p2 + p + 9, base],
                        ),
                        entry(
                            "(t-1)R < l < (t-1)R1 + p, 1 <= t <= (p-1)/2",
                            (1, h),
                            24,
                            move |l, t| (t - 1) * r0 < l && l < (t - 1) * r1 + p,
                            move |t| low(t, 9, -15),
                        ),
                        entry(
                            "(t-1)R1 + p <= l <= tR, 1 <= t <= (p-3)/2",
                            (1, (p - 3) / 2),
                            24,
                            move |l, t| (t - 1) * r1 + p <= l && l <= t * r0,
                            move |t| low(t, -15, 9),
                        ),
                        entry(
                            "((p-3)/2)R1 + p <= l < hR2",
                            NO_T,
                            24,
                            move |l, _| (p - 3) / 2 * r1 + p <= l && l < h * r2,
                            move |_| {
                                vec![
                                    0,
                                    base,
                                    11 * p3 - 6 * p2 - 11 * p + 6,
                                    11 * p3 + 9 * p2 + 25 * p - 21,
                                    p3 - 13 * p + 12,
                                ]
                            },
                        ),
                        entry(
                            "hR2 + p <= l < hR1",
                            NO_T,
                            24,
                            move |l, _| h * r2 + p <= l && l < h * r1,
                            move |_| {
                                vec![
                                    0,
                                    base,
                                    11 * p3 - 6 * p2 - 11 * p + 30,
                                    11 * p3 + 9 * p2 + 25 * p - 45,
                                    p3 - 13 * p + 12,
                                ]
                            },
                        ),
                        entry(
                            "hR1 <= l < hR",
                            NO_T,
                            24,
                            move |l, _| h * r1 <= l && l < h * r0,
                            below_mid,
                        ),
                        entry("l = hR", NO_T, 24, move |l, _| l == h * r0, mid),
                        entry(
                            "hR < l < hR1 + p",
                            NO_T,
                            24,
                            move |l, _| h * r0 < l && l < h * r1 + p,
                            above_mid,
                        ),
                        entry(
                            "(t-1)R < l < (t-1)R1 + p, (p+3)/2 <= t <= p-1",
                            ((p + 3) / 2, p - 1),
                            24,
                            move |l, t| (t - 1) * r0 < l && l < (t - 1) * r1 + p,
                            move |t| high(t, 33, -39),
                        ),
                        entry(
                            "(t-1)R1 + p <= l <= tR, (p+1)/2 <= t <= p-1",
                            ((p + 1) / 2, p - 1),
                            24,
                            move |l, t| (t - 1) * r1 + p <= l && l <= t * r0,
                            move |t| high(t, 9, -15),
                        ),
                    ]
                }
            }
        }
        _ => return Err(Error::Unsupported(format!("no printed table for floor 2k+{rel}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_floors() {
        let f = initial_closed_form(5, 1, 4, 3).unwrap();
        assert_eq!(f.poly, IntPolynomial::from_i64(&[2, 2]));
        let f = initial_closed_form(5, 1, 6, 2).unwrap();
        assert_eq!(f.poly, IntPolynomial::from_i64(&[4, 10, 6]));
        let f = initial_closed_form(3, 0, 4, 0).unwrap();
        assert_eq!(f.poly, IntPolynomial::from_i64(&[2, 3, 1]));
    }

    #[test]
    fn rejects_out_of_scope() {
        assert!(initial_closed_form(5, 0, 5, 0).is_err());
        assert!(initial_closed_form(5, 1, 12, 0).is_err());
        assert!(initial_closed_form(5, 1, 6, 5).is_err());
        assert!(initial_closed_form(4, 1, 6, 0).is_err());
    }
}
