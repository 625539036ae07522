use super::DataSet;

/// Explicit part of a product state: process locations, explicit variable
/// values and the state of the property automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ControlPart {
    pub locations: Vec<u16>,
    pub explicit: Vec<u16>,
    pub buchi: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiState {
    pub control: ControlPart,
    pub data: DataSet,
}

/// Field counts needed to decode an encoded state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub processes: usize,
    pub explicit: usize,
    pub inputs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed state encoding: {0}")]
pub struct DecodeError(pub &'static str);

impl MultiState {
    pub fn new(control: ControlPart, data: DataSet) -> Self {
        MultiState { control, data }
    }

    pub fn layout(&self) -> Layout {
        Layout {
            processes: self.control.locations.len(),
            explicit: self.control.explicit.len(),
            inputs: self.data.arity(),
        }
    }

    /// Canonical byte encoding: locations, explicit values (u16 each), Büchi
    /// state (u32), member count (u32), members (u16 each), little-endian.
    pub fn encode(&self) -> Vec<u8> {
        let c = &self.control;
        let mut out = Vec::with_capacity(
            2 * (c.locations.len() + c.explicit.len() + self.data.raw_values().len()) + 8,
        );
        for v in c.locations.iter().chain(&c.explicit) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&c.buchi.to_le_bytes());
        out.extend_from_slice(&(self.data.len() as u32).to_le_bytes());
        for v in self.data.raw_values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8], layout: Layout) -> Result<MultiState, DecodeError> {
        let mut r = Reader { bytes, pos: 0 };
        let locations = (0..layout.processes)
            .map(|_| r.u16())
            .collect::<Result<Vec<_>, _>>()?;
        let explicit = (0..layout.explicit)
            .map(|_| r.u16())
            .collect::<Result<Vec<_>, _>>()?;
        let buchi = r.u32()?;
        let count = r.u32()? as usize;
        let values = (0..count * layout.inputs)
            .map(|_| r.u16())
            .collect::<Result<Vec<_>, _>>()?;
        if r.pos != bytes.len() {
            return Err(DecodeError("trailing bytes"));
        }
        if layout.inputs == 0 && count > 1 {
            return Err(DecodeError("zero-arity set with several members"));
        }
        let sorted = values
            .chunks_exact(layout.inputs.max(1))
            .zip(values.chunks_exact(layout.inputs.max(1)).skip(1))
            .all(|(a, b)| a < b);
        if layout.inputs > 0 && !sorted {
            return Err(DecodeError("members not in canonical order"));
        }
        Ok(MultiState {
            control: ControlPart {
                locations,
                explicit,
                buchi,
            },
            data: DataSet::from_sorted_flat(layout.inputs, count, values),
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        let end = self.pos + N;
        let s = self
            .bytes
            .get(self.pos..end)
            .ok_or(DecodeError("truncated"))?;
        self.pos = end;
        Ok(s.try_into().expect("slice length"))
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        self.take::<2>().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        self.take::<4>().map(u32::from_le_bytes)
    }
}
