"""Exact WKB expansions of Heun accessory parameters checked against classical conformal blocks"""
