use std::fmt;

/// The sixteen variables of the shared polynomial ring, in their fixed order
/// `t < x1 < ... < x7 < z2 < ... < z7 < Y1 < Y2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u8);

pub const NUM_VARS: usize = 16;

impl VarId {
    pub const T: VarId = VarId(0);
    pub const Y1: VarId = VarId(14);
    pub const Y2: VarId = VarId(15);

    /// `x_i` for `1 <= i <= 7`.
    pub fn x(i: usize) -> VarId {
        assert!((1..=7).contains(&i), "x index {i} out of range");
        VarId(i as u8)
    }

    /// `z_i` for `2 <= i <= 7`.
    pub fn z(i: usize) -> VarId {
        assert!((2..=7).contains(&i), "z index {i} out of range");
        VarId(6 + i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> VarId {
        assert!(i < NUM_VARS);
        VarId(i as u8)
    }

    pub fn all() -> impl Iterator<Item = VarId> {
        (0..NUM_VARS as u8).map(VarId)
    }

    /// Index `i` when this is `x_i`.
    pub fn x_index(self) -> Option<usize> {
        (1..=7).contains(&self.0).then_some(self.0 as usize)
    }

    /// Index `i` when this is `z_i`.
    pub fn z_index(self) -> Option<usize> {
        (8..=13).contains(&self.0).then(|| self.0 as usize - 6)
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "t".to_string(),
            1..=7 => format!("x{}", self.0),
            8..=13 => format!("z{}", self.0 - 6),
            14 => "Y1".to_string(),
            _ => "Y2".to_string(),
        }
    }

    pub fn from_name(name: &str) -> Option<VarId> {
        match name {
            "t" => Some(VarId::T),
            "Y1" => Some(VarId::Y1),
            "Y2" => Some(VarId::Y2),
            _ => {
                let (head, digits) = name.split_at(1);
                let i: usize = digits.parse().ok()?;
                if digits.starts_with('0') || digits.starts_with('+') {
                    return None;
                }
                match head {
                    "x" if (1..=7).contains(&i) => Some(VarId::x(i)),
                    "z" if (2..=7).contains(&i) => Some(VarId::z(i)),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
