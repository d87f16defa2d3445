//! Building an instance by hand, writing it as JSON Lines, reading it back and
//! validating it.

use kftm::model::{append_drain, read_instance_from, validate_order_respecting, write_instance_to, Instance};
use kftm::PacketId;

pub fn run_example() -> kftm::Result<Instance> {
    let p = PacketId::new;
    // the 1-packets tie, so frame 2 may overtake frame 1 on its 2-packet
    let inst = Instance::new(2, 2, vec![vec![p(1, 1), p(2, 1)], vec![p(2, 2)], vec![p(1, 2)]])?.with_name("hand-made");

    let mut buf = Vec::new();
    write_instance_to(&inst, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    let back = read_instance_from(buf.as_slice(), "memory")?;
    assert_eq!(back, inst);

    for v in validate_order_respecting(&back) {
        println!("order violation: {v:?}");
    }
    let drained = append_drain(&back, 4);
    println!(
        "horizon {} -> {} after appending a drain",
        back.horizon(),
        drained.horizon()
    );
    Ok(back)
}

fn main() -> kftm::Result<()> {
    run_example()?;
    Ok(())
}
