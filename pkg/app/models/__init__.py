# Robot Models Package
