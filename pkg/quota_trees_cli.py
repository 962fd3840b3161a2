#!/usr/bin/env python3

from quota_trees.__main__ import main

if __name__ == "__main__":
    main()
