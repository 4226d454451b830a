//more code goes here ...
FileInputStream fis = new FileInputStream(file);
ObjectInputStream ois = new ObjectInputStream(fis);
ArrayList<Record> currentList = new ArrayList<>();
int size = ois.readInt();
for (int i = 0; i < size; i++) {
	Record current = (Record) ois.readObject();
	currentList.add(current); }
