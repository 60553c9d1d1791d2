#!/usr/bin/env python3
"""Regenerates the bundled sample corpus under data/sample/.

Eight synthetic users, 1000 command lines total, written in the normalized
trace format, plus one short man-page text file per command for the
knowledge-base builder. Deterministic: same seed, same bytes.
"""

import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "data" / "sample"

# command -> (description words, follow-set biasing the next command)
COMMANDS = {
    "ls":    ("list directory contents entries names sizes sorting", ["cd", "cat", "vim", "ls", "cp"]),
    "cd":    ("change working directory navigate folder location path", ["ls", "ls", "vim", "make", "git"]),
    "pwd":   ("print working directory current location path name", ["ls", "cd"]),
    "cat":   ("concatenate print files standard output contents display", ["less", "vim", "grep", "ls"]),
    "less":  ("pager display file contents scroll screen viewer", ["vim", "grep", "ls"]),
    "vim":   ("text editor modal editing buffers windows files", ["make", "git", "ls", "vim"]),
    "emacs": ("text editor buffers windows editing extensible lisp", ["make", "git", "ls"]),
    "grep":  ("search pattern lines files regular expression print matching", ["vim", "cat", "wc", "grep"]),
    "find":  ("search files directories hierarchy expression predicates walk", ["grep", "xargs", "ls"]),
    "xargs": ("build execute command lines standard input arguments", ["grep", "rm"]),
    "make":  ("build automation targets rules dependencies compile program", ["make", "gcc", "vim", "git"]),
    "gcc":   ("compile collection sources objects linker program binary", ["make", "vim", "gdb"]),
    "gdb":   ("debugger breakpoints inspect program execution stack symbols", ["vim", "make"]),
    "git":   ("version control repository commit branch merge history", ["git", "make", "vim", "ls"]),
    "cp":    ("copy files directories source destination preserve attributes", ["ls", "mv", "cd"]),
    "mv":    ("move rename files directories source destination overwrite", ["ls", "cd"]),
    "rm":    ("remove delete files directories unlink entries forever", ["ls", "cd"]),
    "mkdir": ("make create directories folders parents mode naming", ["cd", "ls"]),
    "rmdir": ("remove delete empty directories folders cleanup", ["ls"]),
    "touch": ("update timestamps create empty files access modification", ["ls", "vim"]),
    "chmod": ("change file mode bits permissions access owner group", ["ls", "chown"]),
    "chown": ("change file owner group ownership user permissions", ["ls"]),
    "ps":    ("report snapshot current processes status identifiers table", ["kill", "top", "ps"]),
    "top":   ("display processes system resource usage interactive monitor", ["kill", "ps"]),
    "kill":  ("send signal terminate processes identifier number", ["ps", "ls"]),
    "man":   ("manual reference pages documentation sections display", ["ls", "vim", "man"]),
    "echo":  ("display line text arguments standard output write", ["ls", "cat"]),
    "wc":    ("count lines words characters bytes files print totals", ["ls", "grep"]),
    "head":  ("output first part files lines beginning display", ["tail", "cat"]),
    "tail":  ("output last part files lines ending follow display", ["head", "grep"]),
    "sort":  ("sort lines text files ordering keys merge comparison", ["uniq", "wc"]),
    "uniq":  ("report omit repeated adjacent lines duplicates filter", ["sort", "wc"]),
    "diff":  ("compare files line differences patch output change", ["vim", "patch"]),
    "patch": ("apply diff changes source files update modify", ["make", "vim"]),
    "tar":   ("archive create extract files compression bundle store", ["ls", "gzip"]),
    "gzip":  ("compress expand files reduce size encoding storage", ["tar", "ls"]),
    "ssh":   ("remote login secure shell connection host encrypted", ["ls", "scp"]),
    "scp":   ("secure copy files remote hosts network transfer", ["ssh", "ls"]),
    "who":   ("show logged users terminals times system information", ["ps", "ls"]),
    "date":  ("print set system date time formatting clock", ["ls", "who"]),
}

FILES = ["src", "main.c", "notes.txt", "/tmp", "Makefile", "README", "data.csv", "build",
         "paper.tex", "log.txt", "../project", "test.sh", "config.h", "a.out"]
FLAGS = ["-l", "-a", "-r", "-v", "-n", "-f", "--all", "--help", "-o", "-p"]

ALIASES = [("ll", "ls -l"), ("la", "ls -a"), ("gs", "git status"), ("gc", "git commit"),
           ("e", "emacs"), ("m", "make")]

SHARED_SENTENCES = [
    "operating interface option argument",
    "standard unix utility invoked shell prompt",
    "exit status indicates success failure operation",
    "supports options modifying default behaviour",
]


def command_line(rng, cmd):
    parts = [cmd]
    for _ in range(rng.randint(0, 2)):
        parts.append(rng.choice(FLAGS) if rng.random() < 0.4 else rng.choice(FILES))
    return " ".join(parts)


def write_traces(rng):
    traces = ROOT / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    names = list(COMMANDS)
    total_lines = 0
    for user in range(1, 9):
        out = []
        out.append(f"S session user{user:02d}")
        out.append(f"D /home/user{user:02d}")
        user_aliases = rng.sample(ALIASES, rng.randint(1, 3))
        for name, expansion in user_aliases:
            out.append(f"A {name}={expansion}")
        alias_names = [a for a, _ in user_aliases]

        cmd = rng.choice(names)
        for i in range(125):
            total_lines += 1
            use_alias = rng.random() < 0.08
            if use_alias:
                alias = rng.choice(alias_names)
                out.append(f"C {alias}")
                cmd = dict(ALIASES)[alias].split()[0]
            else:
                out.append(f"C {command_line(rng, cmd)}")
            if rng.random() < 0.06:
                out.append("E")
            if rng.random() < 0.05:
                out.append(f"D /home/user{user:02d}/{rng.choice(['src', 'docs', 'build'])}")
            follow = COMMANDS[cmd][1]
            cmd = rng.choice(follow) if rng.random() < 0.8 else rng.choice(names)
        (traces / f"user{user:02d}.txt").write_text("\n".join(out) + "\n")
    return total_lines


def write_man_pages(rng):
    man = ROOT / "man"
    man.mkdir(parents=True, exist_ok=True)
    for cmd, (words, follow) in COMMANDS.items():
        body = [f"{cmd} manual page", ""]
        body.append(f"{cmd} is used to {words}.")
        for _ in range(rng.randint(2, 4)):
            body.append(rng.choice(SHARED_SENTENCES) + " " + " ".join(
                rng.sample(words.split(), min(3, len(words.split())))))
        related = " ".join(follow)
        body.append(f"commonly combined with {related} in interactive sessions.")
        (man / f"{cmd}.txt").write_text("\n".join(body) + "\n")


def write_aliases():
    (ROOT / "aliases.txt").write_text(
        "# shared alias definitions for the repl\n" +
        "\n".join(f"{n}={e}" for n, e in ALIASES) + "\n")


def main():
    rng = random.Random(20240501)
    lines = write_traces(rng)
    write_man_pages(rng)
    write_aliases()
    print(f"wrote {lines} command lines under {ROOT}")


if __name__ == "__main__":
    main()
