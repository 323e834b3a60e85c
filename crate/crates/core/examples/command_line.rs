//! Drives the command-line front end in process, as the `cmverify` binary
//! would: each line is one invocation, followed by its exit status.

use chowla_milnor::cli::main_with_args;

fn main() {
    let lines = [
        "cot --k 2 --a 1 --q 3",
        "verify cor1 --k 3 --q 3,4,5 --format text",
        "suite kernels --format csv",
        "verify cor1 --k 2 --q 5 --m 5 --format text",
        "rank --k 2 --q 3,4 --expect 2 --format text",
        "intersect --k 2",
    ];
    let mut stdout = std::io::stdout();
    for line in lines {
        println!("$ cmverify {line}");
        let args = std::iter::once("cmverify").chain(line.split_whitespace());
        let code = main_with_args(args, &mut stdout, &mut std::io::stdout());
        println!("[exit {code}]\n");
    }
}
