//! Bath labels and their fixed ordering.

/// The three thermal reservoirs, one per qubit.
///
/// Conventional numeric bath indices 1, 2, 3 map to Hot, Room, Cold in that
/// order; the mapping is fixed here once (and pinned by a test on the Bohr
/// frequencies: bath 1 lines center on `omega_H`, bath 2 on `omega_R`,
/// bath 3 on `omega_C`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    /// Hot reservoir driving the machine (qubit at `omega_H`).
    Hot,
    /// Room-temperature reservoir accepting waste heat (qubit at `omega_R`).
    Room,
    /// Cold reservoir being refrigerated (qubit at `omega_C`).
    Cold,
}

impl Bath {
    /// All baths in fixed (Hot, Room, Cold) order.
    pub const ALL: [Bath; 3] = [Bath::Hot, Bath::Room, Bath::Cold];

    /// Zero-based storage index, also the tensor slot of the bath's qubit.
    #[inline]
    pub const fn index(self) -> usize {
        match self {
            Bath::Hot => 0,
            Bath::Room => 1,
            Bath::Cold => 2,
        }
    }

    /// Conventional one-based bath index (1 = Hot, 2 = Room, 3 = Cold).
    #[inline]
    pub const fn numeric(self) -> u8 {
        self.index() as u8 + 1
    }

    /// Single-letter label used in reports and column names.
    pub const fn label(self) -> &'static str {
        match self {
            Bath::Hot => "H",
            Bath::Room => "R",
            Bath::Cold => "C",
        }
    }
}

impl core::fmt::Display for Bath {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}
