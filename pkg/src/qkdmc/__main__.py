from qkdmc.cli import entry

entry()
