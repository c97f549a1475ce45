"""
Services shared by the command line and the HTTP API: request validation and orchestration of the libs
"""
