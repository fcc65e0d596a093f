use super::{parse_netlist, Netlist, NetlistError};

pub const BUILTIN_NAMES: [&str; 4] = ["half_adder", "full_adder", "decoder_2to4", "xor_from_nand"];

const HALF_ADDER: &str = "\
circuit half_adder
inputs A B
gate x1 XOR A B
gate a1 AND A B
outputs SUM=x1 CARRY=a1
";

// Two half adders and an OR on the carries.
const FULL_ADDER: &str = "\
circuit full_adder
inputs A B Cin
gate x1 XOR A B
gate x2 XOR x1 Cin
gate a1 AND A B
gate a2 AND x1 Cin
gate o1 OR a1 a2
outputs SUM=x2 COUT=o1
";

// Inverted inputs apply their stimulus when the logic value is 0.
const DECODER_2TO4: &str = "\
circuit decoder_2to4
inputs A B
gate d0 AND A! B!
gate d1 AND A! B
gate d2 AND A B!
gate d3 AND A B
outputs D0=d0 D1=d1 D2=d2 D3=d3
";

const XOR_FROM_NAND: &str = "\
circuit xor_from_nand
inputs A B
gate n1 NAND A B
gate n2 NAND A n1
gate n3 NAND B n1
gate n4 NAND n2 n3
outputs Y=n4
";

/// Named reference circuits.
pub fn builtin(name: &str) -> Result<Netlist, NetlistError> {
    let src = match name {
        "half_adder" => HALF_ADDER,
        "full_adder" => FULL_ADDER,
        "decoder_2to4" => DECODER_2TO4,
        "xor_from_nand" => XOR_FROM_NAND,
        other => return Err(NetlistError::UnknownBuiltin(other.to_string())),
    };
    Ok(parse_netlist(src).expect("builtin netlists parse"))
}
