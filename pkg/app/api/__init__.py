# API Package