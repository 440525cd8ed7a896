#!/usr/bin/env python3
import sys

from contact_loops.cli import main

if __name__ == '__main__':
  sys.exit(main(['all', *sys.argv[1:]]))
