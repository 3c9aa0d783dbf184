# -*- coding: utf-8 -*-
"""
Concurrence bounds for 2 x K mixed states.
"""
