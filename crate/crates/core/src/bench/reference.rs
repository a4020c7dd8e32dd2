//! Published reference values for the benchmark tables.

use super::TableId;
use crate::solver::Method;

/// One published cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    /// `None` when the published run exceeded the iteration cap.
    pub iterations: Option<usize>,
    pub final_gnorm: Option<f64>,
    pub acoc: Option<f64>,
}

impl ReferenceCell {
    const fn iters(k: usize) -> Self {
        ReferenceCell {
            iterations: Some(k),
            final_gnorm: None,
            acoc: None,
        }
    }
}

const SIZES_T1: [usize; 6] = [1000, 2000, 5000, 10000, 50000, 100000];
const SIZES_WIDE: [usize; 6] = [1000, 2000, 5000, 10000, 20000, 50000];
const SIZES_T4: [usize; 4] = [1000, 2000, 5000, 10000];
const SIZES_T9: [usize; 4] = [500, 1000, 1500, 2000];

type Column = (Method, &'static [Option<usize>]);

const fn c(k: usize) -> Option<usize> {
    Some(k)
}

const T1: [Column; 4] = [
    (Method::Ss1, &[c(7), c(7), c(7), c(7), c(7), c(7)]),
    (Method::Ss2, &[c(4), c(4), c(5), c(5), c(5), c(5)]),
    (Method::Ss3, &[c(4), c(4), c(5), c(4), c(4), c(4)]),
    (Method::Bb, &[c(7), c(7), c(7), c(7), c(7), c(7)]),
];
const T2: [Column; 4] = [
    (Method::Ss1, &[c(72), c(31), c(28), c(25), c(29), c(41)]),
    (Method::Ss2, &[c(37), c(39), c(36), c(34), c(30), c(21)]),
    (Method::Ss3, &[c(18), c(19), c(18), c(18), c(18), c(18)]),
    (Method::Bb, &[c(27), c(24), c(24), c(24), c(32), c(24)]),
];
const T3: [Column; 4] = [
    (
        Method::Ss1,
        &[c(304), c(296), c(293), c(302), c(326), c(361)],
    ),
    (Method::Ss2, &[c(60), c(66), c(60), c(62), c(60), c(60)]),
    (Method::Ss3, &[c(54), c(44), c(45), c(48), c(109), c(53)]),
    (Method::Bb, &[c(75), c(76), c(87), c(65), c(74), c(94)]),
];
const T4: [Column; 3] = [
    (Method::Ss1, &[c(494), c(925), c(1902), None]),
    (Method::Ss2, &[c(294), c(391), c(715), c(708)]),
    (Method::Bb, &[c(276), c(466), c(689), c(1093)]),
];
const T5: [Column; 3] = [
    (
        Method::Ss1,
        &[c(1209), c(1134), c(1019), c(1063), c(951), c(1009)],
    ),
    (
        Method::Ss2,
        &[c(182), c(183), c(175), c(185), c(180), c(168)],
    ),
    (
        Method::Bb,
        &[c(232), c(222), c(233), c(201), c(215), c(214)],
    ),
];
const T6: [Column; 4] = [
    (
        Method::Ss1,
        &[c(110), c(111), c(111), c(112), c(112), c(115)],
    ),
    (Method::Ss2, &[c(39), c(39), c(39), c(39), c(39), c(41)]),
    (Method::Ss3, &[c(26), c(26), c(26), c(26), c(26), c(29)]),
    (Method::Bb, &[c(29), c(30), c(31), c(31), c(28), c(35)]),
];
const T9: [Column; 5] = [
    (Method::Ss1, &[c(47), c(49), c(51), c(52)]),
    (Method::Ss2, &[c(24), c(26), c(27), c(27)]),
    (Method::Ss3, &[c(17), c(18), c(18), c(19)]),
    (Method::Bb, &[c(5540), c(14427), c(22706), c(29538)]),
    (Method::Cg, &[c(500), c(1000), c(1500), c(2000)]),
];

fn lookup(sizes: &[usize], columns: &[Column], method: Method, n: usize) -> Option<ReferenceCell> {
    let row = sizes.iter().position(|&s| s == n)?;
    let (_, col) = columns.iter().find(|(m, _)| *m == method)?;
    Some(ReferenceCell {
        iterations: col[row],
        final_gnorm: None,
        acoc: None,
    })
}

/// Published value for `(table, method, n)`, or `None` when no value exists.
pub fn reference(table: TableId, method: Method, n: usize) -> Option<ReferenceCell> {
    match table {
        TableId::T1 => lookup(&SIZES_T1, &T1, method, n),
        TableId::T2 => lookup(&SIZES_WIDE, &T2, method, n),
        TableId::T3 => lookup(&SIZES_WIDE, &T3, method, n),
        TableId::T4 => lookup(&SIZES_T4, &T4, method, n),
        TableId::T5 => lookup(&SIZES_WIDE, &T5, method, n),
        TableId::T6 => lookup(&SIZES_WIDE, &T6, method, n),
        TableId::T9 => lookup(&SIZES_T9, &T9, method, n),
        TableId::T8 => {
            if n != 100 {
                return None;
            }
            let (k, g) = match method {
                Method::Ss1 => (690, 9.81e-7),
                Method::Ss2 => (46, 6.40e-7),
                Method::Ss3 => (37, 8.02e-8),
                Method::Bb => (102, 8.33e-7),
                _ => return None,
            };
            Some(ReferenceCell {
                final_gnorm: Some(g),
                ..ReferenceCell::iters(k)
            })
        }
        TableId::T10 => {
            let (k, g, rho) = match method {
                Method::Ss1 => (9, 9.502e-23, 2.00),
                Method::Ss2 => (6, 2.1082e-18, 3.98),
                Method::Ss3 => (5, 2.6362e-14, 5.76),
                _ => return None,
            };
            Some(ReferenceCell {
                iterations: Some(k),
                final_gnorm: Some(g),
                acoc: Some(rho),
            })
        }
    }
}

/// Sizes listed in a table.
pub(crate) fn table_sizes(table: TableId) -> &'static [usize] {
    match table {
        TableId::T1 => &SIZES_T1,
        TableId::T2 | TableId::T3 | TableId::T5 | TableId::T6 => &SIZES_WIDE,
        TableId::T4 => &SIZES_T4,
        TableId::T8 => &[100],
        TableId::T9 => &SIZES_T9,
        TableId::T10 => &[15],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(
            reference(TableId::T1, Method::Ss1, 1000)
                .unwrap()
                .iterations,
            Some(7)
        );
        assert_eq!(
            reference(TableId::T3, Method::Ss3, 20000)
                .unwrap()
                .iterations,
            Some(109)
        );
        assert_eq!(
            reference(TableId::T4, Method::Ss1, 10000)
                .unwrap()
                .iterations,
            None
        );
        assert!(reference(TableId::T4, Method::Ss3, 1000).is_none());
        assert!(reference(TableId::T5, Method::Ss3, 1000).is_none());
        assert!(reference(TableId::T1, Method::Ss1, 123).is_none());
        let t8 = reference(TableId::T8, Method::Ss3, 100).unwrap();
        assert_eq!(t8.iterations, Some(37));
        assert_eq!(t8.final_gnorm, Some(8.02e-8));
        assert_eq!(
            reference(TableId::T10, Method::Ss2, 15).unwrap().acoc,
            Some(3.98)
        );
    }
}
