use std::fmt::Write;

/// Two-process Peterson mutual exclusion with an input counter `l` ranging
/// over `0..r` that each critical section advances modulo `r`. The model
/// carries a `liveness` property.
pub fn generate_peterson(r: u32) -> Result<String, String> {
    if r == 0 || r > u32::from(u16::MAX) {
        return Err(format!("r must be in 1..={}, got {r}", u16::MAX));
    }
    let mut out = String::new();
    let _ = writeln!(out, "// Peterson's algorithm for two processes; l counts critical sections modulo {r}.");
    let _ = writeln!(out, "model peterson_{r};");
    let _ = writeln!(out);
    let _ = writeln!(out, "byte flag_0 = 0, flag_1 = 0, turn = 0;");
    let _ = writeln!(out, "input int l = 0..{r};");
    for i in 0..2 {
        let j = 1 - i;
        let _ = writeln!(out);
        let _ = writeln!(out, "process P_{i} {{");
        let _ = writeln!(out, "    state ncs, want, wait, cs;");
        let _ = writeln!(out, "    init ncs;");
        let _ = writeln!(out, "    trans");
        let _ = writeln!(out, "        ncs -> ncs {{}},");
        let _ = writeln!(out, "        ncs -> want {{ effect flag_{i} = 1; }},");
        let _ = writeln!(out, "        want -> wait {{ effect turn = {j}; }},");
        let _ = writeln!(out, "        wait -> cs {{ guard flag_{j} == 0 || turn == {i}; }},");
        let _ = writeln!(out, "        cs -> ncs {{ effect flag_{i} = 0, l = (l + 1) % {r}; }};");
        let _ = writeln!(out, "}}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "#property liveness {{");
    for i in 0..2 {
        let _ = writeln!(out, "    ap wait_{i} = P_{i}@wait;");
        let _ = writeln!(out, "    ap crit_{i} = P_{i}@cs;");
    }
    let _ = writeln!(out, "    ltl G ((wait_0 -> F crit_0) && (wait_1 -> F crit_1));");
    let _ = writeln!(out, "}}");
    Ok(out)
}
